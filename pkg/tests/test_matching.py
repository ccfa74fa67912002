from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cubenorm import kernels, matching
from cubenorm.matching import Matching, WeightMatrix, brute_force_matching, min_weight_perfect_matching
from conftest import oracle_matchings


@st.composite
def weight_matrices(draw, min_n=2, max_n=10, rational=False):
    n = 2 * draw(st.integers(min_n // 2, max_n // 2))
    if rational:
        vals = st.fractions(min_value=0, max_value=20, max_denominator=9)
    else:
        vals = st.integers(0, 30)
    w = np.zeros((n, n), dtype=object)
    for i in range(n):
        for j in range(i + 1, n):
            w[i, j] = w[j, i] = draw(vals)
    return w


def _enumerated_min(w):
    n = len(w)
    return min(sum(w[i][j] for i, j in m) for m in oracle_matchings(n))


def test_small_example():
    w = np.full((4, 4), 10)
    w[0, 1] = w[1, 0] = w[2, 3] = w[3, 2] = 1
    m, total = min_weight_perfect_matching(w)
    assert m.pairs == frozenset({(0, 1), (2, 3)})
    assert total == 2


def test_validation():
    with pytest.raises(ValueError):
        WeightMatrix([[0, 1, 2]])
    with pytest.raises(ValueError):
        WeightMatrix([[0]])
    with pytest.raises(ValueError):
        WeightMatrix([[0, 1], [2, 0]])
    with pytest.raises(ValueError):
        WeightMatrix([[0, -1], [-1, 0]])
    with pytest.raises(ValueError):
        min_weight_perfect_matching(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        brute_force_matching(np.zeros((14, 14)))


@given(weight_matrices())
def test_solver_matches_enumeration(w):
    m, total = min_weight_perfect_matching(w)
    assert m.is_perfect(len(w))
    assert m.weight(w) == total
    assert total == _enumerated_min(w)
    assert brute_force_matching(w)[1] == total


@given(weight_matrices(max_n=6, rational=True))
def test_rational_weights_exact(w):
    m, total = min_weight_perfect_matching(w)
    assert isinstance(total, (int, Fraction))
    assert total == _enumerated_min(w)


@given(weight_matrices(max_n=8), st.data())
def test_relabeling_invariance(w, data):
    n = len(w)
    p = data.draw(st.permutations(range(n)))
    w2 = w[np.ix_(p, p)]
    assert min_weight_perfect_matching(w2)[1] == min_weight_perfect_matching(w)[1]


@pytest.mark.parametrize("n", [22, 26, 30])
def test_blossom_path_matches_dp(n, monkeypatch):
    rng = np.random.default_rng(n)
    w = np.triu(rng.integers(0, 100, size=(n, n)), 1)
    w = w + w.T
    m, total = min_weight_perfect_matching(w)
    assert m.is_perfect(n) and m.weight(w) == total
    if n == 22:
        assert total == kernels.matching_dp_numba(w)[0]
    # the sub-block of the first 20 vertices: blossom and DP agree when forced
    sub = w[:20, :20]
    dp_total = min_weight_perfect_matching(sub)[1]
    monkeypatch.setattr(matching, "DP_LIMIT", 0)
    assert min_weight_perfect_matching(sub)[1] == dp_total


def test_large_graph_needs_rational_weights():
    w = np.full((22, 22), 0.5)
    with pytest.raises(ValueError):
        min_weight_perfect_matching(w)


def test_matching_from_mate():
    m = Matching.from_mate([1, 0, 3, 2])
    assert m.pairs == frozenset({(0, 1), (2, 3)})
    assert m.is_perfect(4) and not m.is_perfect(6)
