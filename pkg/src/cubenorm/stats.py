"""Attribute-wise frequency statistics and fractional allocation cubes.

Everything here is exact: probabilities and allocation values are
``Fraction``s (stored internally as integer numerators over one common
denominator).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from .cost import DEFAULT_PARAMS, CostParams
from .cube import Normalization, SparseCube, _as_dims

__all__ = [
    "DimDistribution",
    "FractionalAllocationCube",
    "IndependenceReport",
    "dim_distributions",
    "joint_probability_cube",
    "independent_allocation_cube",
    "independence_sum",
    "fs_bound",
]


def _require_cells(cube: SparseCube) -> None:
    if cube.n_cells == 0:
        raise ValueError("statistics are undefined for an empty cube")


@dataclass(frozen=True)
class DimDistribution:
    dim: int
    probs: tuple[Fraction, ...]


class FractionalAllocationCube:
    """Cube of values in ``[0, 1]`` (unless built uncapped), zero where absent.

    Stored as the coordinates of the nonzero cells, their integer numerators
    and one shared denominator.
    """

    __slots__ = ("dims", "coords", "numerators", "denominator")

    def __init__(self, dims, coords, numerators, denominator: int = 1):
        self.dims = _as_dims(dims)
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, self.dims.d)
        nums = [int(x) for x in numerators]
        if len(nums) != len(coords):
            raise ValueError("one numerator per coordinate required")
        if denominator <= 0:
            raise ValueError("denominator must be positive")
        if any(x < 0 for x in nums):
            raise ValueError("allocation values must be nonnegative")
        keep = [k for k, x in enumerate(nums) if x]
        self.coords = coords[keep]
        self.numerators = [nums[k] for k in keep]
        self.denominator = int(denominator)

    @classmethod
    def from_mapping(cls, dims, values: Mapping[tuple, Fraction]) -> "FractionalAllocationCube":
        fr = {tuple(k): Fraction(v) for k, v in values.items()}
        den = math.lcm(*(v.denominator for v in fr.values())) if fr else 1
        keys = list(fr)
        return cls(dims, np.array(keys, dtype=np.int64).reshape(len(keys), _as_dims(dims).d),
                   [fr[k] * den for k in keys], den)

    @classmethod
    def strict(cls, cube: SparseCube) -> "FractionalAllocationCube":
        """The 0/1 allocation cube of ``cube``."""
        return cls(cube.dims, cube.coords, [1] * cube.n_cells, 1)

    def items(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        for c, x in zip(self.coords, self.numerators):
            yield tuple(int(v) for v in c), Fraction(x, self.denominator)

    def value(self, cell) -> Fraction:
        cell = tuple(cell)
        for c, x in self.items():
            if c == cell:
                return x
        return Fraction(0)

    def as_dict(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.items())

    @property
    def total(self) -> Fraction:
        """``#A``, the sum of all values."""
        return Fraction(sum(self.numerators), self.denominator)

    def max_value(self) -> Fraction:
        return Fraction(max(self.numerators, default=0), self.denominator)

    def support(self) -> SparseCube:
        return SparseCube(self.dims, self.coords)

    def normalized(self, norm: Normalization) -> "FractionalAllocationCube":
        norm.check(self.dims)
        new = np.empty_like(self.coords)
        for j, p in enumerate(norm.perms):
            new[:, j] = p.inverse().mapping[self.coords[:, j]]
        return FractionalAllocationCube(self.dims, new, self.numerators, self.denominator)

    def to_dense(self) -> np.ndarray:
        out = np.full(self.dims.extents, Fraction(0), dtype=object)
        for c, v in self.items():
            out[c] = v
        return out

    def __repr__(self):
        return f"FractionalAllocationCube(dims={self.dims}, nonzero={len(self.numerators)}, #A={self.total})"


@dataclass(frozen=True)
class IndependenceReport:
    independence_sum: Fraction
    bound: Fraction
    cell_count: int


def dim_distributions(cube: SparseCube) -> list[DimDistribution]:
    _require_cells(cube)
    n = cube.n_cells
    return [
        DimDistribution(j, tuple(Fraction(int(c), n) for c in cube.counts(j)))
        for j in range(cube.d)
    ]


def joint_probability_cube(cube: SparseCube) -> FractionalAllocationCube:
    """``Psi``: ``1/#C`` on every allocated cell."""
    _require_cells(cube)
    return FractionalAllocationCube(cube.dims, cube.coords, [1] * cube.n_cells, cube.n_cells)


def _count_products(counts: list[np.ndarray], coords: np.ndarray) -> list[int]:
    prod = np.ones(len(coords), dtype=object)
    for j, c in enumerate(counts):
        prod = prod * c.astype(object)[coords[:, j]]
    return prod.tolist()


def independent_allocation_cube(cube: SparseCube, cap: bool = True) -> FractionalAllocationCube:
    """``Phi * #C`` where ``Phi`` is the product of the per-dimension marginals.

    The value at cell ``i`` is ``prod_j count_j[i_j] / #C**(d-1)``.  With
    ``cap=True`` values above 1 are clamped to 1.
    """
    _require_cells(cube)
    n, d = cube.n_cells, cube.d
    counts = [cube.counts(j) for j in range(d)]
    support = [np.flatnonzero(c) for c in counts]
    grid = np.stack([g.ravel() for g in np.meshgrid(*support, indexing="ij")], axis=1)
    nums = _count_products(counts, grid)
    den = n ** (d - 1)
    if cap:
        nums = [min(x, den) for x in nums]
    return FractionalAllocationCube(cube.dims, grid, nums, den)


def independence_sum(cube: SparseCube) -> Fraction:
    """``Phi . B``: the product-of-marginals mass sitting on allocated cells."""
    _require_cells(cube)
    counts = [cube.counts(j) for j in range(cube.d)]
    return Fraction(sum(_count_products(counts, cube.coords)), cube.n_cells ** cube.d)


def fs_bound(cube: SparseCube, params: CostParams = DEFAULT_PARAMS) -> IndependenceReport:
    """Worst-case gap between a frequency-sorted and an optimal layout."""
    is_ = independence_sum(cube)
    bound = params.sparse_cell_cost(cube.d) * (1 - is_) * cube.n_cells
    return IndependenceReport(is_, bound, cube.n_cells)
