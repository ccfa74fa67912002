"""Block-coded (HOLAP) storage cost.

Each block of shape ``m_1 x ... x m_d`` is stored either densely, at a cost of
``M`` (its cell count), or as a list of tuples, at ``1 + alpha*d`` per
allocated cell; the cheaper option is taken.  Blocks on the upper boundary
of a dimension whose extent is not a multiple of ``m_k`` are clipped and
their ``M`` is the clipped cell count.

All costs are exact ``Fraction`` values.  Internally costs are accumulated as
integers in units of ``1/q`` where ``alpha = p/q``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .cube import CubeDims, SparseCube, _as_dims

__all__ = [
    "BlockShape",
    "CostParams",
    "BlockView",
    "block_grid",
    "block_counts",
    "holap_cost",
    "per_cell_cost",
    "fractional_holap_cost",
    "classify_blocks",
    "rolap_cost",
]


@dataclass(frozen=True)
class BlockShape:
    extents: tuple[int, ...]

    def __post_init__(self):
        ext = tuple(int(m) for m in self.extents)
        if not ext or any(m < 1 for m in ext):
            raise ValueError(f"block extents must be positive, got {ext}")
        object.__setattr__(self, "extents", ext)

    @classmethod
    def regular(cls, m: int, d: int) -> "BlockShape":
        return cls((m,) * d)

    @classmethod
    def size2(cls, dim: int, d: int) -> "BlockShape":
        """Blocks of two cells along ``dim`` and one cell elsewhere."""
        return cls(tuple(2 if j == dim else 1 for j in range(d)))

    @property
    def volume(self) -> int:
        return math.prod(self.extents)

    def check(self, dims: CubeDims) -> None:
        if len(self.extents) != dims.d:
            raise ValueError(
                f"block shape {self.extents} has arity {len(self.extents)}, cube has {dims.d} dimensions"
            )

    def __str__(self):
        return "x".join(map(str, self.extents))


@dataclass(frozen=True)
class CostParams:
    alpha: Fraction = Fraction(1, 2)

    def __post_init__(self):
        a = Fraction(self.alpha)
        if a < 0:
            raise ValueError(f"alpha must be nonnegative, got {a}")
        object.__setattr__(self, "alpha", a)

    def sparse_cell_cost(self, d: int) -> Fraction:
        """Cost of one tuple-encoded cell, ``1 + alpha*d``."""
        return 1 + self.alpha * d

    def break_even(self, d: int) -> Fraction:
        return 1 / self.sparse_cell_cost(d)

    def scaled(self, d: int) -> tuple[int, int]:
        """``(s, q)`` with ``1 + alpha*d == s/q`` in lowest-denominator form of alpha."""
        q = self.alpha.denominator
        return q + self.alpha.numerator * d, q


DEFAULT_PARAMS = CostParams()


@dataclass(frozen=True)
class BlockView:
    origin: tuple[int, ...]  # block-grid coordinates
    extents: tuple[int, ...]  # clipped extents
    allocated: int | Fraction

    @property
    def volume(self) -> int:
        return math.prod(self.extents)


def _grid_shape(dims: CubeDims, shape: BlockShape) -> tuple[int, ...]:
    return tuple(-(-n // m) for n, m in zip(dims.extents, shape.extents))


def _clipped(dims: CubeDims, shape: BlockShape, origin) -> tuple[int, ...]:
    return tuple(min(m, n - b * m) for b, m, n in zip(origin, shape.extents, dims.extents))


def block_counts(cube: SparseCube, shape: BlockShape) -> tuple[np.ndarray, np.ndarray]:
    """Occupied blocks and their allocated-cell counts.

    Returns ``(origins, counts)``: ``origins`` is a ``(k, d)`` array of
    block-grid coordinates for the ``k`` blocks holding at least one cell.
    """
    shape.check(cube.dims)
    if cube.n_cells == 0:
        return np.empty((0, cube.d), dtype=np.int64), np.empty(0, dtype=np.int64)
    m = np.asarray(shape.extents, dtype=np.int64)
    grid = _grid_shape(cube.dims, shape)
    flat = np.ravel_multi_index(tuple((cube.coords // m).T), grid)
    ids, counts = np.unique(flat, return_counts=True)
    origins = np.stack(np.unravel_index(ids, grid), axis=1).astype(np.int64)
    return origins, counts.astype(np.int64)


def _block_volumes(dims: CubeDims, shape: BlockShape, origins: np.ndarray) -> np.ndarray:
    m = np.asarray(shape.extents, dtype=np.int64)
    n = np.asarray(dims.extents, dtype=np.int64)
    return np.prod(np.minimum(m, n - origins * m), axis=1)


def block_grid(dims, shape: BlockShape, cube: SparseCube | None = None) -> Iterator[BlockView]:
    """Yield every block of the grid once, in C order, with clipped extents.

    When ``cube`` is given, each view carries its allocated-cell count.
    """
    dims = _as_dims(dims)
    shape.check(dims)
    lookup = {}
    if cube is not None:
        origins, counts = block_counts(cube, shape)
        lookup = {tuple(o.tolist()): int(c) for o, c in zip(origins, counts)}
    for origin in itertools.product(*(range(g) for g in _grid_shape(dims, shape))):
        yield BlockView(origin, _clipped(dims, shape, origin), lookup.get(origin, 0))


def _scaled_cost(cube: SparseCube, shape: BlockShape, params: CostParams) -> tuple[int, int]:
    origins, counts = block_counts(cube, shape)
    if not len(counts):
        return 0, 1
    s, q = params.scaled(cube.d)
    vol = _block_volumes(cube.dims, shape, origins)
    return int(np.minimum(vol * q, counts * s).sum()), q


def holap_cost(cube: SparseCube, shape: BlockShape, params: CostParams = DEFAULT_PARAMS) -> Fraction:
    """``H(C)``: sum over blocks of ``min(M, (1 + alpha*d) * D)``."""
    num, q = _scaled_cost(cube, shape, params)
    return Fraction(num, q)


def per_cell_cost(cube: SparseCube, shape: BlockShape, params: CostParams = DEFAULT_PARAMS) -> Fraction:
    """``E(C) = H(C) / #C``, with ``E = 1`` for an empty cube."""
    shape.check(cube.dims)
    if cube.n_cells == 0:
        return Fraction(1)
    return holap_cost(cube, shape, params) / cube.n_cells


def rolap_cost(cube: SparseCube, params: CostParams = DEFAULT_PARAMS) -> Fraction:
    """Cost of storing every allocated cell as a tuple."""
    return params.sparse_cell_cost(cube.d) * cube.n_cells


def classify_blocks(cube: SparseCube, shape: BlockShape, params: CostParams = DEFAULT_PARAMS):
    """Map occupied block origin -> ``"dense"`` or ``"sparse"``.

    A block is dense only when the tuple encoding is strictly more expensive;
    at the tie it is reported sparse.
    """
    origins, counts = block_counts(cube, shape)
    s, q = params.scaled(cube.d)
    vol = _block_volumes(cube.dims, shape, origins)
    dense = counts * s > vol * q
    return {tuple(o.tolist()): ("dense" if f else "sparse") for o, f in zip(origins, dense)}


def fractional_holap_cost(acube, shape: BlockShape, params: CostParams = DEFAULT_PARAMS) -> Fraction:
    """HOLAP cost of a fractional allocation cube.

    ``acube`` is a :class:`cubenorm.stats.FractionalAllocationCube`; per block
    the cost is ``min(M, (1 + alpha*d) * Dhat)`` with ``Dhat`` the sum of the
    block's values.
    """
    dims = acube.dims
    shape.check(dims)
    num = acube.numerators
    if len(num) and min(num) < 0:
        raise ValueError("allocation values must be nonnegative")
    if not len(num):
        return Fraction(0)
    den = acube.denominator
    s, q = params.scaled(dims.d)
    m = np.asarray(shape.extents, dtype=np.int64)
    grid = _grid_shape(dims, shape)
    flat = np.ravel_multi_index(tuple((acube.coords // m).T), grid)
    ids, inverse = np.unique(flat, return_inverse=True)
    sums = [0] * len(ids)
    for k, v in zip(inverse.tolist(), num):
        sums[k] += v
    origins = np.stack(np.unravel_index(ids, grid), axis=1).astype(np.int64)
    vol = _block_volumes(dims, shape, origins).tolist()
    # cost*q*den = min(M*q*den, s*sum)
    total = sum(min(M * q * den, s * sm) for M, sm in zip(vol, sums))
    return Fraction(total, q * den)
