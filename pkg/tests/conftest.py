import itertools
import math
import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from cubenorm import from_dense

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


# ---------------------------------------------------------------- fixtures

CHECKER = [[1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1]]
ROW2 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 1, 1, 0], [0, 0, 0, 0]]
ROW3 = [[1, 0, 1, 0], [0, 1, 1, 1], [1, 1, 1, 0], [0, 1, 0, 1]]
IDENT4 = np.eye(4, dtype=int).tolist()
SIX_ROWS = [[0, 0, 0, 0], [1, 1, 0, 1], [1, 0, 0, 0], [0, 1, 1, 0], [0, 1, 0, 0], [1, 0, 0, 1]]

SMALL_CASES = [
    # cube, min H, FS H, independence sum, FS bound
    (CHECKER, 8, 16, Fraction(1, 2), Fraction(8)),
    (ROW2, 6, 6, Fraction(9, 16), Fraction(7, 2)),
    (ROW3, 12, 16, Fraction(17, 25), Fraction(32, 5)),
    (IDENT4, 8, 8, Fraction(1, 4), Fraction(6)),
]


@pytest.fixture
def checker():
    return from_dense(CHECKER)


@pytest.fixture
def six_rows():
    return from_dense(SIX_ROWS)


# ------------------------------------------------------------- strategies


@st.composite
def cubes(draw, min_d=1, max_d=3, max_n=5, min_cells=0):
    d = draw(st.integers(min_d, max_d))
    ext = tuple(draw(st.lists(st.integers(1, max_n), min_size=d, max_size=d)))
    size = math.prod(ext)
    bits = draw(st.lists(st.booleans(), min_size=size, max_size=size))
    if sum(bits) < min_cells:
        bits = [True] * min(size, max(min_cells, 1)) + bits[min(size, max(min_cells, 1)):]
    return from_dense(np.array(bits, dtype=bool).reshape(ext))


@st.composite
def perms_for(draw, cube):
    return [draw(st.permutations(range(n))) for n in cube.dims.extents]


def random_cube(rng, ext, p=None):
    p = rng.random() if p is None else p
    return from_dense(rng.random(ext) < p)


# ----------------------------------------------------------------- oracles
# Straight loops over the dense array; no library cost code involved.


def oracle_holap(dense, block, alpha=Fraction(1, 2)):
    dense = np.asarray(dense, dtype=bool)
    d = dense.ndim
    sparse = 1 + alpha * d
    total = Fraction(0)
    for origin in itertools.product(*(range(0, n, m) for n, m in zip(dense.shape, block))):
        sl = tuple(slice(o, min(o + m, n)) for o, m, n in zip(origin, block, dense.shape))
        sub = dense[sl]
        total += min(Fraction(sub.size), sparse * int(sub.sum()))
    return total


def oracle_benefit(dense, dim):
    dense = np.moveaxis(np.asarray(dense, dtype=bool), dim, 0)
    n = dense.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for v in range(n):
        for w in range(n):
            if v != w:
                out[v, w] = int(np.logical_and(dense[v], dense[w]).sum())
    return out


def oracle_independence_sum(dense):
    dense = np.asarray(dense, dtype=bool)
    total = int(dense.sum())
    d = dense.ndim
    counts = [[int(dense.take(v, axis=j).sum()) for v in range(dense.shape[j])] for j in range(d)]
    s = Fraction(0)
    for cell in zip(*np.nonzero(dense)):
        s += Fraction(math.prod(counts[j][cell[j]] for j in range(d)), total**d)
    return s


def oracle_min_cost(dense, block, alpha=Fraction(1, 2)):
    """Minimum over every normalization by direct enumeration."""
    dense = np.asarray(dense, dtype=bool)
    best = None
    for perms in itertools.product(*(itertools.permutations(range(n)) for n in dense.shape)):
        view = dense[np.ix_(*perms)]
        c = oracle_holap(view, block, alpha)
        if best is None or c < best:
            best = c
    return best


def oracle_matchings(n):
    if n == 0:
        yield []
        return
    verts = list(range(n))

    def rec(vs):
        if not vs:
            yield []
            return
        a = vs[0]
        for k in range(1, len(vs)):
            b = vs[k]
            for rest in rec(vs[1:k] + vs[k + 1:]):
                yield [(a, b)] + rest

    yield from rec(verts)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
