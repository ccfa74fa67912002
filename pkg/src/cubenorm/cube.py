"""Sparse data cubes, slices and normalizations.

A cube is reduced to its allocation pattern: a set of allocated cell
coordinates inside a box of extents ``n_1 x ... x n_d``.  Measure values play
no role in normalization and are never stored.

Indices are 0-based.  A normalization is a tuple of permutations, one per
dimension, with the convention ``result[i_1..i_d] = source[g_1(i_1)..g_d(i_d)]``;
``Permutation.mapping[i]`` is therefore the *source* index that ends up at
position ``i``.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CubeDims",
    "SparseCube",
    "SliceRef",
    "Permutation",
    "Normalization",
    "from_tuples",
    "from_dense",
    "slice_count",
    "slice_counts",
    "apply",
    "compose",
    "invert",
    "equivalence_class_cardinality",
    "density",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CubeDims:
    extents: tuple[int, ...]

    def __post_init__(self):
        ext = tuple(int(n) for n in self.extents)
        if len(ext) < 1:
            raise ValueError("a cube needs at least one dimension")
        if any(n < 1 for n in ext):
            raise ValueError(f"extents must be positive, got {ext}")
        object.__setattr__(self, "extents", ext)

    @property
    def d(self) -> int:
        return len(self.extents)

    @property
    def size(self) -> int:
        return math.prod(self.extents)

    def __iter__(self):
        return iter(self.extents)

    def __len__(self):
        return len(self.extents)

    def __getitem__(self, j):
        return self.extents[j]

    def __str__(self):
        return "x".join(map(str, self.extents))


def _as_dims(dims) -> CubeDims:
    return dims if isinstance(dims, CubeDims) else CubeDims(tuple(dims))


class SparseCube:
    """Immutable set of allocated cells.

    ``coords`` is an ``(#C, d)`` int64 array, lexicographically sorted and
    duplicate-free, so two cubes with the same cells compare equal
    array-for-array.
    """

    __slots__ = ("dims", "coords", "_counts")

    def __init__(self, dims, coords=None, *, _trusted: bool = False):
        dims = _as_dims(dims)
        d = dims.d
        if coords is None:
            arr = np.empty((0, d), dtype=np.int64)
        else:
            arr = np.asarray(coords, dtype=np.int64)
            if arr.size == 0:
                arr = arr.reshape(0, d)
        if arr.ndim != 2 or arr.shape[1] != d:
            raise ValueError(f"coordinates must have shape (k, {d}), got {arr.shape}")
        if not _trusted and len(arr):
            ext = np.asarray(dims.extents, dtype=np.int64)
            bad = (arr < 0) | (arr >= ext)
            if bad.any():
                row, col = np.argwhere(bad)[0]
                raise ValueError(
                    f"cell {tuple(int(x) for x in arr[row])} out of range in "
                    f"dimension {int(col)} (extent {int(ext[col])})"
                )
            arr = np.unique(arr, axis=0)
        self.dims = dims
        self.coords = _frozen(np.ascontiguousarray(arr))
        self._counts = None

    @property
    def d(self) -> int:
        return self.dims.d

    @property
    def n_cells(self) -> int:
        """``#C``, the number of allocated cells."""
        return len(self.coords)

    def __len__(self):
        return self.n_cells

    def cells(self) -> set[tuple[int, ...]]:
        return {tuple(int(x) for x in row) for row in self.coords}

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dims.extents, dtype=bool)
        if self.n_cells:
            out[tuple(self.coords.T)] = True
        return out

    def counts(self, dim: int) -> np.ndarray:
        """Allocated cells per slice along ``dim`` (read-only)."""
        if self._counts is None:
            self._counts = tuple(
                _frozen(np.bincount(self.coords[:, j], minlength=n).astype(np.int64))
                for j, n in enumerate(self.dims.extents)
            )
        return self._counts[dim]

    def __eq__(self, other):
        if not isinstance(other, SparseCube):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash((self.dims, self.coords.tobytes()))

    def __repr__(self):
        return f"SparseCube(dims={self.dims}, #C={self.n_cells})"


def from_tuples(coords: Iterable[Sequence[int]], dims) -> SparseCube:
    """Build a cube from coordinate tuples; duplicates collapse to one cell."""
    dims = _as_dims(dims)
    rows = [tuple(c) for c in coords]
    for t in rows:
        if len(t) != dims.d:
            raise ValueError(f"cell {t} has arity {len(t)}, expected {dims.d}")
    return SparseCube(dims, np.array(rows, dtype=np.int64).reshape(len(rows), dims.d))


def from_dense(array) -> SparseCube:
    """Cube whose allocated cells are the nonzero entries of ``array``."""
    a = np.asarray(array)
    return SparseCube(CubeDims(a.shape), np.argwhere(a != 0), _trusted=True)


@dataclass(frozen=True)
class SliceRef:
    dim: int
    value: int


def slice_count(cube: SparseCube, s: SliceRef) -> int:
    if not 0 <= s.dim < cube.d:
        raise ValueError(f"dimension {s.dim} out of range for a {cube.d}-d cube")
    if not 0 <= s.value < cube.dims[s.dim]:
        raise ValueError(f"value {s.value} out of range for dimension {s.dim}")
    return int(cube.counts(s.dim)[s.value])


def slice_counts(cube: SparseCube, dim: int) -> np.ndarray:
    return cube.counts(dim)


class Permutation:
    __slots__ = ("mapping",)

    def __init__(self, mapping):
        m = np.asarray(mapping, dtype=np.int64).ravel()
        if not np.array_equal(np.sort(m), np.arange(len(m))):
            raise ValueError(f"not a permutation: {m.tolist()}")
        self.mapping = _frozen(m)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    def __len__(self):
        return len(self.mapping)

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.mapping)
        inv[self.mapping] = np.arange(len(self.mapping))
        return Permutation(inv)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.mapping, np.arange(len(self.mapping))))

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self.mapping, other.mapping)

    def __hash__(self):
        return hash(self.mapping.tobytes())

    def __repr__(self):
        return f"Permutation({self.mapping.tolist()})"


class Normalization:
    """A d-tuple of permutations."""

    __slots__ = ("perms",)

    def __init__(self, perms: Sequence):
        self.perms = tuple(p if isinstance(p, Permutation) else Permutation(p) for p in perms)

    @classmethod
    def identity(cls, dims) -> "Normalization":
        return cls([Permutation.identity(n) for n in _as_dims(dims).extents])

    @property
    def extents(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.perms)

    def is_identity(self) -> bool:
        return all(p.is_identity() for p in self.perms)

    def check(self, dims) -> None:
        dims = _as_dims(dims)
        if self.extents != dims.extents:
            raise ValueError(
                f"normalization extents {self.extents} do not match cube extents {dims.extents}"
            )

    def __eq__(self, other):
        if not isinstance(other, Normalization):
            return NotImplemented
        return self.perms == other.perms

    def __hash__(self):
        return hash(self.perms)

    def __repr__(self):
        return f"Normalization({[p.mapping.tolist() for p in self.perms]})"


def apply(norm: Normalization, cube: SparseCube) -> SparseCube:
    """Normalized cube: cell ``i`` is allocated iff ``(g_1(i_1), ...)`` was."""
    norm.check(cube.dims)
    if cube.n_cells == 0:
        return cube
    new = np.empty_like(cube.coords)
    for j, p in enumerate(norm.perms):
        inv = np.empty_like(p.mapping)
        inv[p.mapping] = np.arange(len(p.mapping))
        new[:, j] = inv[cube.coords[:, j]]
    order = np.lexsort(new.T[::-1])
    return SparseCube(cube.dims, new[order], _trusted=True)


def compose(a: Normalization, b: Normalization) -> Normalization:
    """Normalization equal to applying ``b`` first, then ``a``."""
    if a.extents != b.extents:
        raise ValueError(f"cannot compose normalizations of extents {a.extents} and {b.extents}")
    return Normalization([Permutation(pb.mapping[pa.mapping]) for pa, pb in zip(a.perms, b.perms)])


def invert(a: Normalization) -> Normalization:
    return Normalization([p.inverse() for p in a.perms])


def _slice_signatures(cube: SparseCube, dim: int) -> list[bytes]:
    """One hashable key per slice: its cell set with ``dim`` removed."""
    n = cube.dims[dim]
    rest = np.delete(cube.coords, dim, axis=1)
    keys: list[list] = [[] for _ in range(n)]
    # coords are lexsorted, so each slice's positions come out in a canonical order
    order = np.argsort(cube.coords[:, dim], kind="stable")
    for v, pos in zip(cube.coords[order, dim], rest[order]):
        keys[int(v)].append(pos.tobytes())
    return [b"|".join(k) for k in keys]


def equivalence_class_cardinality(cube: SparseCube) -> int:
    """Product over dimensions of the multinomial of identical-slice multiplicities.

    This counts normalizations modulo swaps of identical slices within one
    dimension.  It upper-bounds the number of distinct normalized cubes and
    equals it unless some joint permutation of several dimensions fixes the
    cube (the 2x2 identity gives 4 here but only 2 distinct cubes).
    """
    total = 1
    for j, n in enumerate(cube.dims.extents):
        mult = Counter(_slice_signatures(cube, j)).values()
        term = math.factorial(n)
        for k in mult:
            term //= math.factorial(k)
        total *= term
    return total


def density(cube: SparseCube) -> Fraction:
    return Fraction(cube.n_cells, cube.dims.size)
