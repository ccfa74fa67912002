"""Exact minimum HOLAP cost by exhaustive search, for small cubes.

Two independent routes:

* :func:`min_cost_over_orders` tries every normalization (``prod n_k!``).
* :func:`min_cost_over_partitions` uses the fact that the cost only depends
  on how each dimension's values are grouped into blocks, not on the order of
  the groups or the order inside a group.  It enumerates those groupings,
  which is far fewer (3 instead of 24 for four values in pairs).
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterator

from .cost import DEFAULT_PARAMS, BlockShape, CostParams, holap_cost
from .cube import Normalization, Permutation, SparseCube, apply

__all__ = [
    "min_cost_over_orders",
    "min_cost_over_partitions",
    "block_groupings",
    "min_cost_along_dim",
]

MAX_ORDERS = 2_000_000


def min_cost_over_orders(
    cube: SparseCube, shape: BlockShape, params: CostParams = DEFAULT_PARAMS
) -> tuple[Fraction, Normalization]:
    """Minimum over all ``prod n_k!`` normalizations (first minimum found)."""
    shape.check(cube.dims)
    total = math.prod(math.factorial(n) for n in cube.dims.extents)
    if total > MAX_ORDERS:
        raise ValueError(f"{total} normalizations is too many to enumerate")
    best, arg = None, None
    for perms in itertools.product(*(itertools.permutations(range(n)) for n in cube.dims.extents)):
        norm = Normalization(perms)
        c = holap_cost(apply(norm, cube), shape, params)
        if best is None or c < best:
            best, arg = c, norm
    return best, arg


def min_cost_along_dim(
    cube: SparseCube, dim: int, shape: BlockShape, params: CostParams = DEFAULT_PARAMS
) -> tuple[Fraction, Normalization]:
    """Minimum over the ``n_dim!`` orders of one dimension, others fixed."""
    shape.check(cube.dims)
    ident = [Permutation.identity(n) for n in cube.dims.extents]
    best, arg = None, None
    for p in itertools.permutations(range(cube.dims[dim])):
        perms = list(ident)
        perms[dim] = Permutation(p)
        norm = Normalization(perms)
        c = holap_cost(apply(norm, cube), shape, params)
        if best is None or c < best:
            best, arg = c, norm
    return best, arg


def _groupings(items: tuple[int, ...], m: int) -> Iterator[list[tuple[int, ...]]]:
    """Unordered partitions of ``items`` into blocks of size ``m``.

    ``len(items)`` must be a multiple of ``m``.
    """
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for mates in itertools.combinations(rest, m - 1):
        remaining = tuple(x for x in rest if x not in mates)
        for tail in _groupings(remaining, m):
            yield [(first,) + mates] + tail


def block_groupings(n: int, m: int) -> Iterator[tuple[int, ...]]:
    """One representative order per distinct grouping of ``n`` values into ``m``-blocks.

    The clipped remainder block (``n % m`` values) is placed last.
    """
    m = min(m, n)
    r = n % m
    values = tuple(range(n))
    tails = itertools.combinations(values, r) if r else [()]
    for tail in tails:
        head = tuple(v for v in values if v not in tail)
        for groups in _groupings(head, m):
            yield tuple(v for g in groups for v in g) + tail


def min_cost_over_partitions(
    cube: SparseCube, shape: BlockShape, params: CostParams = DEFAULT_PARAMS
) -> tuple[Fraction, Normalization]:
    shape.check(cube.dims)
    per_dim = [list(block_groupings(n, m)) for n, m in zip(cube.dims.extents, shape.extents)]
    if math.prod(len(x) for x in per_dim) > MAX_ORDERS:
        raise ValueError("too many block groupings to enumerate")
    best, arg = None, None
    for perms in itertools.product(*per_dim):
        norm = Normalization(perms)
        c = holap_cost(apply(norm, cube), shape, params)
        if best is None or c < best:
            best, arg = c, norm
    return best, arg
