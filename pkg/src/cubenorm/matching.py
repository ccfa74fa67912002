"""Exact minimum-weight perfect matching on complete graphs.

Up to ``DP_LIMIT`` vertices the solver is an exact dynamic program over vertex
subsets (see :mod:`cubenorm.kernels`).  Larger graphs go to the blossom
implementation in networkx, run on integer weights so the result stays exact.
``brute_force_matching`` enumerates every perfect matching and exists to
check the solver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational

import numpy as np

from . import kernels

__all__ = [
    "WeightMatrix",
    "Matching",
    "min_weight_perfect_matching",
    "brute_force_matching",
    "DP_LIMIT",
]

DP_LIMIT = 20
BRUTE_FORCE_LIMIT = 12


class WeightMatrix:
    """Symmetric weights of a complete graph; the diagonal is ignored."""

    __slots__ = ("w",)

    def __init__(self, w):
        a = np.asarray(w, dtype=object if _has_fractions(w) else None)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"weight matrix must be square, got shape {a.shape}")
        if a.shape[0] < 2:
            raise ValueError("need at least two vertices")
        iu = np.triu_indices(a.shape[0], 1)
        if not all(x == y for x, y in zip(a[iu], a.T[iu])):
            raise ValueError("weight matrix must be symmetric")
        if any(x < 0 for x in a[iu]):
            raise ValueError("weights must be nonnegative")
        self.w = a

    @property
    def n(self) -> int:
        return self.w.shape[0]


def _has_fractions(w) -> bool:
    a = np.asarray(w, dtype=object)
    return any(isinstance(x, Fraction) for x in a.ravel())


@dataclass(frozen=True)
class Matching:
    pairs: frozenset[tuple[int, int]]

    @classmethod
    def from_mate(cls, mate) -> "Matching":
        return cls(frozenset((int(i), int(j)) for i, j in enumerate(mate) if i < j))

    def is_perfect(self, n: int) -> bool:
        seen = [v for p in self.pairs for v in p]
        return len(seen) == n and sorted(seen) == list(range(n))

    def weight(self, w) -> object:
        a = w.w if isinstance(w, WeightMatrix) else np.asarray(w, dtype=object)
        return sum((a[i, j] for i, j in self.pairs), start=0)


def _exact_integers(a: np.ndarray) -> tuple[np.ndarray, int] | None:
    """Scale an all-rational matrix to int64; ``None`` for floats."""
    flat = a.ravel()
    if a.dtype.kind in "iu":
        return a.astype(np.int64), 1
    if a.dtype.kind == "O" and all(isinstance(x, Rational) for x in flat):
        den = math.lcm(*(Fraction(x).denominator for x in flat))
        scaled = [int(Fraction(x) * den) for x in flat]
        if max(abs(x) for x in scaled) < 2**62 // max(len(a), 1):
            return np.array(scaled, dtype=np.int64).reshape(a.shape), den
        return None
    return None


def _blossom(a: np.ndarray) -> np.ndarray:
    import networkx as nx

    n = len(a)
    top = max(int(x) for x in a[np.triu_indices(n, 1)]) + 1
    g = nx.Graph()
    for i in range(n):
        for j in range(i + 1, n):
            # maximize (top - w) under max cardinality == minimize w over perfect matchings
            g.add_edge(i, j, weight=top - int(a[i, j]))
    mate = np.full(n, -1, dtype=np.int64)
    for i, j in nx.max_weight_matching(g, maxcardinality=True):
        mate[i], mate[j] = j, i
    return mate


def min_weight_perfect_matching(w) -> tuple[Matching, object]:
    """Cheapest perfect matching and its total weight.

    Integer and ``Fraction`` weights are solved exactly and the total is
    returned as ``int``/``Fraction``; float weights give a float total.
    """
    wm = w if isinstance(w, WeightMatrix) else WeightMatrix(w)
    n = wm.n
    if n % 2:
        raise ValueError(f"a perfect matching needs an even number of vertices, got {n}")
    exact = _exact_integers(wm.w)
    if n <= DP_LIMIT:
        if exact is not None:
            scaled, den = exact
            total, mate = kernels.matching_dp(scaled)
            total = Fraction(int(total), den) if den != 1 else int(total)
        else:
            total, mate = kernels.matching_dp(wm.w.astype(np.float64))
            total = float(total)
        return Matching.from_mate(mate), total
    if exact is None:
        raise ValueError(f"graphs above {DP_LIMIT} vertices require rational weights")
    scaled, den = exact
    m = Matching.from_mate(_blossom(scaled))
    total = m.weight(scaled)
    return m, (Fraction(int(total), den) if den != 1 else int(total))


def _all_perfect_matchings(vertices: list[int]):
    if not vertices:
        yield []
        return
    a = vertices[0]
    for k in range(1, len(vertices)):
        b = vertices[k]
        rest = vertices[1:k] + vertices[k + 1:]
        for tail in _all_perfect_matchings(rest):
            yield [(a, b)] + tail


def brute_force_matching(w) -> tuple[Matching, object]:
    """Enumerate all ``(n-1)!!`` perfect matchings and keep the first minimum."""
    wm = w if isinstance(w, WeightMatrix) else WeightMatrix(w)
    n = wm.n
    if n % 2:
        raise ValueError(f"a perfect matching needs an even number of vertices, got {n}")
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force is limited to {BRUTE_FORCE_LIMIT} vertices, got {n}")
    a = wm.w.astype(object)
    best, best_total = None, None
    for pairs in _all_perfect_matchings(list(range(n))):
        total = sum((a[i, j] for i, j in pairs), start=0)
        if best_total is None or total < best_total:
            best, best_total = pairs, total
    if isinstance(best_total, Integral):
        best_total = int(best_total)
    return Matching(frozenset(best)), best_total
