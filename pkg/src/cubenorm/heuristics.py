"""Normalization algorithms.

* ``frequency_sort`` (FS): each dimension ordered by slice allocation count.
* ``greedy_sort`` (GS): iterated dense/sparse classification of attribute
  values against the break-even density, then a density sort.
* ``optimal_size2``: exact optimum for blocks that are 2 cells long in one
  dimension and 1 cell elsewhere, by minimum-weight perfect matching.
* ``iterated_matching`` (IM): ``optimal_size2`` applied to each dimension
  once.

Every function returns a :class:`~cubenorm.cube.Normalization`; none of them
modifies the cube.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import kernels
from .cost import DEFAULT_PARAMS, CostParams
from .cube import Normalization, Permutation, SparseCube, apply, compose
from .matching import WeightMatrix, min_weight_perfect_matching

__all__ = [
    "SliceSortKey",
    "GsState",
    "PairingWeights",
    "slice_sort",
    "frequency_sort",
    "greedy_sort",
    "greedy_sort_trace",
    "pairing_weights",
    "optimal_size2",
    "iterated_matching",
    "HEURISTICS",
    "run_heuristic",
]


@dataclass(frozen=True)
class SliceSortKey:
    dim: int
    keys: tuple


def _descending_order(keys) -> np.ndarray:
    """Indices sorting ``keys`` high-to-low, ties by original index."""
    keys = list(keys)
    # sorted(reverse=True) is stable: equal keys keep ascending index order
    return np.array(sorted(range(len(keys)), key=keys.__getitem__, reverse=True), dtype=np.int64)


def slice_sort(cube: SparseCube, keys: list[SliceSortKey]) -> Normalization:
    """Sort every dimension's values by descending key (stable)."""
    by_dim = {k.dim: k.keys for k in keys}
    perms = []
    for j, n in enumerate(cube.dims.extents):
        k = by_dim.get(j)
        if k is None:
            perms.append(Permutation.identity(n))
            continue
        if len(k) != n:
            raise ValueError(f"dimension {j} needs {n} keys, got {len(k)}")
        perms.append(Permutation(_descending_order(k)))
    return Normalization(perms)


def _crossing_mass(cube: SparseCube, dim: int) -> np.ndarray:
    """Per value of ``dim``: summed counts of the other-dimension slices its cells lie in."""
    w = np.zeros(len(cube.coords), dtype=np.int64)
    for k in range(cube.d):
        if k != dim:
            w += cube.counts(k)[cube.coords[:, k]]
    out = np.zeros(cube.dims[dim], dtype=np.int64)
    np.add.at(out, cube.coords[:, dim], w)
    return out


def frequency_sort(cube: SparseCube, tie_break: str = "index") -> Normalization:
    """Most-populated slices first in every dimension.

    ``tie_break="index"`` keeps equal-count values in input order.
    ``tie_break="crossing"`` first orders them by the summed counts of the
    slices they cross (a normalization-invariant quantity) and only then by
    input order.  Either way the result is a valid frequency sort.
    """
    if tie_break not in ("index", "crossing"):
        raise ValueError(f"unknown tie_break {tie_break!r}")
    keys = []
    for j in range(cube.d):
        counts = cube.counts(j).tolist()
        if tie_break == "crossing":
            keys.append(SliceSortKey(j, tuple(zip(counts, _crossing_mass(cube, j).tolist()))))
        else:
            keys.append(SliceSortKey(j, tuple(counts)))
    return slice_sort(cube, keys)


# --------------------------------------------------------------------------
# Greedy Sort


@dataclass(frozen=True)
class GsState:
    phase: int  # 1-based
    dim: int  # dimension just processed
    dense_sets: tuple[frozenset[int], ...]
    rho: tuple[tuple[Fraction, ...], ...]  # most recent restricted density per value
    break_even: Fraction


def greedy_sort_trace(
    cube: SparseCube, params: CostParams = DEFAULT_PARAMS, max_phases: int = 20
) -> Iterator[GsState]:
    """Run the GS classification loop, yielding the state after each dimension pass.

    Stops after ``max_phases`` phases, or after the first phase in which no
    dense set changed.
    """
    if cube.n_cells == 0:
        raise ValueError("greedy sort needs a nonempty cube")
    d = cube.d
    ext = cube.dims.extents
    s, q = params.scaled(d)  # break-even density = q/s
    be = Fraction(q, s)
    member = [np.ones(n, dtype=bool) for n in ext]
    rho = [[Fraction(int(c), cube.dims.size // n) for c in cube.counts(j)] for j, n in enumerate(ext)]
    coords = cube.coords
    for phase in range(1, max_phases + 1):
        changed = False
        for i in range(d):
            keep = np.ones(len(coords), dtype=bool)
            area = 1
            for j in range(d):
                if j != i:
                    keep &= member[j][coords[:, j]]
                    area *= int(member[j].sum())
            counts = np.bincount(coords[keep, i], minlength=ext[i])
            dense = counts * s >= area * q
            if not dense.any():
                dense[int(np.argmax(counts))] = True
            if not np.array_equal(dense, member[i]):
                changed = True
            member[i] = dense
            rho[i] = [Fraction(int(c), area) for c in counts]
            yield GsState(
                phase,
                i,
                tuple(frozenset(np.flatnonzero(m).tolist()) for m in member),
                tuple(tuple(r) for r in rho),
                be,
            )
        if not changed:
            break


def greedy_sort(cube: SparseCube, params: CostParams = DEFAULT_PARAMS, max_phases: int = 20) -> Normalization:
    """GS normalization: values sorted by their final restricted density."""
    if cube.n_cells == 0:
        raise ValueError("greedy sort needs a nonempty cube")
    state = None
    for state in greedy_sort_trace(cube, params, max_phases):
        pass
    return slice_sort(cube, [SliceSortKey(j, r) for j, r in enumerate(state.rho)])


# --------------------------------------------------------------------------
# pairing weights and matching-based normalizations


@dataclass(frozen=True)
class PairingWeights:
    """Cost of storing slices ``v`` and ``w`` together in 2-long blocks.

    ``numerators / scale`` is the weight matrix; ``single`` holds the cost of
    a slice left alone in a clipped one-cell-long block (odd extents).
    """

    dim: int
    counts: np.ndarray
    benefit: np.ndarray
    numerators: np.ndarray
    single: np.ndarray
    scale: int

    @property
    def matrix(self) -> WeightMatrix:
        return WeightMatrix(self.numerators)

    def weight(self, v: int, w: int) -> Fraction:
        return Fraction(int(self.numerators[v, w]), self.scale)


def _position_keys(cube: SparseCube, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Sort cells by (position within slice, slice label)."""
    rest = np.delete(cube.coords, dim, axis=1)
    rest_ext = tuple(n for j, n in enumerate(cube.dims.extents) if j != dim)
    if rest.shape[1]:
        pos = np.ravel_multi_index(tuple(rest.T), rest_ext).astype(np.int64)
    else:
        pos = np.zeros(len(rest), dtype=np.int64)
    lab = cube.coords[:, dim]
    order = np.lexsort((lab, pos))
    return pos[order], lab[order]


def pairing_benefits(cube: SparseCube, dim: int) -> np.ndarray:
    """``benefit[v, w]``: positions allocated in both slice ``v`` and slice ``w``."""
    pos, lab = _position_keys(cube, dim)
    return kernels.pair_benefits(pos, lab, cube.dims[dim])


def pairing_weights(cube: SparseCube, dim: int, params: CostParams = DEFAULT_PARAMS) -> PairingWeights:
    """Edge weights of the slice-pairing graph along ``dim``.

    A block holding two allocated cells costs ``min(2, 2*(1 + alpha*d))``, one
    holding a single cell ``min(2, 1 + alpha*d)``.  With the default alpha
    and ``d >= 2`` both are 2, so the weight is ``2*(#v + #w - benefit)``.
    """
    counts = cube.counts(dim).astype(np.int64)
    benefit = pairing_benefits(cube, dim)
    s, q = params.scaled(cube.d)
    half = min(2 * q, s)  # scaled by q
    full = min(2 * q, 2 * s)
    tot = counts[:, None] + counts[None, :]
    num = full * benefit + half * (tot - 2 * benefit)
    np.fill_diagonal(num, 0)
    # a lone slice sits in a clipped block of one cell: min(1, 1 + alpha*d) = 1 per cell
    single = counts * min(q, s)
    return PairingWeights(dim, counts, benefit, num, single, q)


def _pairing_order(pw: PairingWeights) -> np.ndarray:
    """Solve the pairing problem and lay matched slices out consecutively.

    Pairs are listed by their smaller original index, and inside a pair the
    smaller index comes first.  No other ordering is imposed: ranking pairs
    by count would add clustering that larger blocks reward, which is not
    part of matching.  For an odd extent the unmatched slice goes last, into
    the clipped block.
    """
    n = len(pw.counts)
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    w = pw.numerators
    lone = None
    if n % 2:
        # dummy vertex n: pairing with it leaves the slice alone
        w = np.zeros((n + 1, n + 1), dtype=np.int64)
        w[:n, :n] = pw.numerators
        w[:n, n] = w[n, :n] = pw.single
    matching, _ = min_weight_perfect_matching(w)
    pairs = []
    for a, b in matching.pairs:
        if b == n:
            lone = a
        elif a == n:
            lone = b
        else:
            pairs.append((min(a, b), max(a, b)))
    pairs.sort()
    order = [v for p in pairs for v in p]
    if lone is not None:
        order.append(lone)
    return np.array(order, dtype=np.int64)


def optimal_size2(cube: SparseCube, dim: int, params: CostParams = DEFAULT_PARAMS) -> Normalization:
    """Cost-minimal normalization for blocks 2 long along ``dim``, 1 elsewhere.

    Only ``dim`` is permuted; every other dimension keeps the identity.
    """
    if not 0 <= dim < cube.d:
        raise ValueError(f"dimension {dim} out of range for a {cube.d}-d cube")
    perms = [Permutation.identity(n) for n in cube.dims.extents]
    perms[dim] = Permutation(_pairing_order(pairing_weights(cube, dim, params)))
    return Normalization(perms)


def iterated_matching(cube: SparseCube, params: CostParams = DEFAULT_PARAMS) -> Normalization:
    """IM: one matching pass per dimension, in dimension order."""
    norm = Normalization.identity(cube.dims)
    current = cube
    for k in range(cube.d):
        step = optimal_size2(current, k, params)
        current = apply(step, current)
        norm = compose(step, norm)
    return norm


def _size2_all(cube: SparseCube, params: CostParams = DEFAULT_PARAMS, dim: int | None = None) -> Normalization:
    if dim is None:
        return iterated_matching(cube, params)
    return optimal_size2(cube, dim, params)


def _fs(cube, params=DEFAULT_PARAMS, tie_break="index", **_):
    return frequency_sort(cube, tie_break)


def _gs(cube, params=DEFAULT_PARAMS, **_):
    if cube.n_cells == 0:
        return Normalization.identity(cube.dims)
    return greedy_sort(cube, params)


def _im(cube, params=DEFAULT_PARAMS, **_):
    return iterated_matching(cube, params)


def _size2(cube, params=DEFAULT_PARAMS, dim=None, **_):
    return _size2_all(cube, params, dim)


HEURISTICS = {"fs": _fs, "gs": _gs, "im": _im, "size2-exact": _size2}


def run_heuristic(name: str, cube: SparseCube, params: CostParams = DEFAULT_PARAMS, **kw) -> Normalization:
    try:
        fn = HEURISTICS[name]
    except KeyError:
        raise ValueError(f"unknown heuristic {name!r}; choose from {sorted(HEURISTICS)}") from None
    return fn(cube, params, **kw)
