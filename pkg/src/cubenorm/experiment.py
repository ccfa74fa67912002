"""Seeded experiment runs over synthetic or file-based cubes.

Run ``r`` uses the integer seed ``seed + r`` for every generator, so
``cubenorm generate --preset NAME --seed R`` rebuilds exactly the cube of run
``R`` and adding runs never changes earlier ones.  A run builds a kernel
cube, optionally adds noise, scrambles it with a uniform random
normalization, then scores every configured heuristic against the scrambled
("default") layout.
"""
from __future__ import annotations

import csv
import io
import json
import statistics
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .cost import DEFAULT_PARAMS, BlockShape, CostParams, holap_cost
from .cube import CubeDims, SparseCube, apply, density
from .datagen import KernelSpec, NoiseSpec, add_noise, kernel_cube, random_normalization
from .heuristics import HEURISTICS, run_heuristic
from .ingest import export_cube, export_normalization, read_cube
from .stats import fs_bound

__all__ = [
    "DatasetSpec",
    "ExperimentConfig",
    "RunRecord",
    "ExperimentReport",
    "PRESETS",
    "preset",
    "run_experiment",
    "analyze_independence",
]


@dataclass(frozen=True)
class DatasetSpec:
    """Synthetic kernel data (``dims``/``block``/``fill_prob``/``noise_prob``) or cube files."""

    dims: tuple[int, ...] = (12, 12, 12, 12)
    kernel_block: tuple[int, ...] = (2, 2, 2, 2)
    fill_prob: Fraction = Fraction(1, 2)
    noise_prob: Fraction = Fraction(0)
    scramble: bool = True
    files: tuple[str, ...] = ()


@dataclass(frozen=True)
class ExperimentConfig:
    name: str = "experiment"
    dataset: DatasetSpec = field(default_factory=DatasetSpec)
    block: tuple[int, ...] = (2, 2, 2, 2)
    alpha: Fraction = Fraction(1, 2)
    heuristics: tuple[str, ...] = ("fs", "gs", "im")
    runs: int = 100
    seed: int = 0

    def validate(self) -> None:
        if self.runs < 1:
            raise ValueError("run count must be at least 1")
        unknown = [h for h in self.heuristics if h not in HEURISTICS]
        if unknown:
            raise ValueError(f"unknown heuristics {unknown}; choose from {sorted(HEURISTICS)}")
        if not self.heuristics:
            raise ValueError("no heuristics configured")
        ds = self.dataset
        if not ds.files:
            if len(ds.dims) != len(self.block) or len(ds.kernel_block) != len(ds.dims):
                raise ValueError("dims, kernel block and scoring block must have equal arity")
            for p in (ds.fill_prob, ds.noise_prob):
                if not 0 <= p <= 1:
                    raise ValueError(f"probability {p} outside [0, 1]")
        CostParams(self.alpha)
        BlockShape(self.block)


PRESETS = {
    "kbase": dict(fill_prob=Fraction(1, 2), noise_prob=Fraction(0), m=2),
    "ksp": dict(fill_prob=Fraction(1, 10), noise_prob=Fraction(0), m=2),
    "ksp+n": dict(fill_prob=Fraction(1, 10), noise_prob=Fraction(3, 100), m=2),
    "k4sp+n": dict(fill_prob=Fraction(1, 10), noise_prob=Fraction(3, 100), m=4),
}


def preset(name: str, runs: int = 100, seed: int = 0, heuristics: Sequence[str] = ("fs", "gs", "im"),
           n: int = 12, d: int = 4) -> ExperimentConfig:
    """Synthetic benchmark configurations: ``kbase``, ``ksp``, ``ksp+n``, ``k4sp+n``."""
    try:
        p = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    block = (p["m"],) * d
    ds = DatasetSpec((n,) * d, block, p["fill_prob"], p["noise_prob"])
    return ExperimentConfig(name, ds, block, Fraction(1, 2), tuple(heuristics), runs, seed)


@dataclass
class RunRecord:
    run: int
    heuristic: str
    h_default: Fraction
    h_heuristic: Fraction
    ratio: float
    density: float
    independence_sum: float
    fs_bound: float
    wall_time: float | None = None

    def row(self) -> dict:
        out = asdict(self)
        out["h_default"] = str(self.h_default)
        out["h_heuristic"] = str(self.h_heuristic)
        if self.wall_time is None:
            del out["wall_time"]
        return out


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    records: list[RunRecord]

    def ratios(self, heuristic: str) -> list[float]:
        return [r.ratio for r in self.records if r.heuristic == heuristic]

    def aggregates(self) -> dict[str, dict[str, float]]:
        out = {}
        for h in self.config.heuristics:
            xs = self.ratios(h)
            out[h] = {
                "mean": statistics.fmean(xs),
                "std": statistics.stdev(xs) if len(xs) > 1 else 0.0,
                "runs": len(xs),
            }
        return out

    def to_json(self) -> str:
        cfg = asdict(self.config)
        cfg["alpha"] = str(self.config.alpha)
        cfg["dataset"]["fill_prob"] = str(self.config.dataset.fill_prob)
        cfg["dataset"]["noise_prob"] = str(self.config.dataset.noise_prob)
        payload = {
            "config": cfg,
            "aggregates": self.aggregates(),
            "runs": [r.row() for r in self.records],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        rows = [r.row() for r in self.records]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()


def _run_cubes(config: ExperimentConfig):
    ds = config.dataset
    if ds.files:
        files = list(ds.files)
        for r in range(config.runs):
            yield r, read_cube(files[r % len(files)])
        return
    dims = CubeDims(ds.dims)
    kblock = BlockShape(ds.kernel_block)
    for r in range(config.runs):
        child = config.seed + r
        cube = kernel_cube(KernelSpec(dims, kblock, ds.fill_prob, child))
        if ds.noise_prob:
            cube = add_noise(cube, NoiseSpec(ds.noise_prob, child))
        if ds.scramble:
            cube = apply(random_normalization(dims, child), cube)
        yield r, cube


def run_experiment(config: ExperimentConfig, timing: bool = False, dump_dir=None) -> ExperimentReport:
    """Run every configured heuristic on every run's cube.

    Without ``timing`` the report is a pure function of the config.  With
    ``dump_dir`` each run's input cube and each heuristic's normalization are
    written there so any reported cost can be re-scored.
    """
    config.validate()
    params = CostParams(config.alpha)
    shape = BlockShape(config.block)
    dump = Path(dump_dir) if dump_dir is not None else None
    if dump is not None:
        dump.mkdir(parents=True, exist_ok=True)
    records = []
    for r, cube in _run_cubes(config):
        shape.check(cube.dims)
        h0 = holap_cost(cube, shape, params)
        if cube.n_cells:
            rep = fs_bound(cube, params)
            is_, bound = float(rep.independence_sum), float(rep.bound)
        else:
            is_, bound = float("nan"), 0.0
        if dump is not None:
            (dump / f"run{r:04d}.cube").write_bytes(export_cube(cube))
        for h in config.heuristics:
            t0 = time.perf_counter()
            norm = run_heuristic(h, cube, params)
            elapsed = time.perf_counter() - t0
            h1 = holap_cost(apply(norm, cube), shape, params)
            if dump is not None:
                (dump / f"run{r:04d}.{h}.norm").write_bytes(export_normalization(norm))
            records.append(RunRecord(
                r, h, h0, h1,
                float(h1 / h0) if h0 else 1.0,
                float(density(cube)), is_, bound,
                elapsed if timing else None,
            ))
    return ExperimentReport(config, records)


def analyze_independence(cubes: Sequence[SparseCube], shape: BlockShape,
                         params: CostParams = DEFAULT_PARAMS) -> list[dict]:
    """Independence Sum against the FS/IM cost ratio, one row per cube."""
    rows = []
    for k, cube in enumerate(cubes):
        if cube.n_cells == 0:
            continue
        h_fs = holap_cost(apply(run_heuristic("fs", cube, params), cube), shape, params)
        h_im = holap_cost(apply(run_heuristic("im", cube, params), cube), shape, params)
        rows.append({
            "cube": k,
            "independence_sum": float(fs_bound(cube, params).independence_sum),
            "h_fs": str(h_fs),
            "h_im": str(h_im),
            "fs_over_im": float(h_fs / h_im),
            "density": float(density(cube)),
        })
    return rows
