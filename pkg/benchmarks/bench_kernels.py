"""Time the numba and numpy kernels side by side.

    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call compiles (or loads from cache); it is timed separately
and excluded from the steady-state numbers.
"""
import argparse
import time

import numpy as np

from cubenorm import BlockShape, KernelSpec, NoiseSpec, add_noise, kernel_cube
from cubenorm.heuristics import _position_keys, pairing_weights
from cubenorm.kernels import matching_dp_numba, matching_dp_numpy, pair_benefits_numba, pair_benefits_numpy


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    cases = []
    for n in (12, 20, 32):
        cube = kernel_cube(KernelSpec((n,) * 4, BlockShape.regular(2, 4), 0.3, seed=1))
        cube = add_noise(cube, NoiseSpec(0.03, seed=1))
        pos, lab = _position_keys(cube, 0)
        cases.append((f"pair_benefits n={n} cells={cube.n_cells}", pair_benefits_numba, pair_benefits_numpy,
                      (pos, lab, n)))
    for n in (12, 16, 20):
        cube = add_noise(kernel_cube(KernelSpec((n,) * 3, BlockShape.regular(2, 3), 0.3, seed=2)),
                         NoiseSpec(0.05, seed=2))
        w = np.ascontiguousarray(pairing_weights(cube, 0).numerators)
        cases.append((f"matching_dp n={n}", matching_dp_numba, matching_dp_numpy, (w,)))

    print(f"{'kernel':42s} {'compile':>9s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, fast, slow, a in cases:
        t0 = time.perf_counter()
        r_fast = fast(*a)
        compile_t = time.perf_counter() - t0
        r_slow = slow(*a)
        same = (np.array_equal(r_fast, r_slow) if isinstance(r_fast, np.ndarray)
                else r_fast[0] == r_slow[0] and np.array_equal(r_fast[1], r_slow[1]))
        assert same, name
        tf = best_of(fast, a, args.repeat)
        ts = best_of(slow, a, args.repeat)
        print(f"{name:42s} {compile_t:9.3f} {tf * 1e3:8.2f}ms {ts * 1e3:8.2f}ms {ts / tf:7.1f}x")


if __name__ == "__main__":
    main()
