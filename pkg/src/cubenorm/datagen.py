"""Seeded generators for synthetic benchmark cubes.

Randomness comes from numpy's PCG64 driven by ``SeedSequence``, which gives
the same stream on every platform.  Stream splitting: a generator called with
an integer seed uses ``SeedSequence([seed, TAG])`` where ``TAG`` is fixed per
generator kind, so kernel, noise and scrambling draws made from the same
integer seed are independent.  Within a stream, draws are consumed in C order
of the block grid (kernels), of the full cell index space (noise), and
dimension by dimension (normalizations).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cost import BlockShape, _grid_shape, block_counts, _block_volumes
from .cube import CubeDims, Normalization, Permutation, SparseCube, _as_dims

__all__ = [
    "KernelSpec",
    "NoiseSpec",
    "kernel_cube",
    "is_kernel",
    "add_noise",
    "random_normalization",
    "rng_for",
]

_TAG_KERNEL = 0x4B45524E
_TAG_NOISE = 0x4E4F4953
_TAG_PERM = 0x5045524D


def rng_for(seed, tag: int) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        ss = np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key + (tag,))
    else:
        ss = np.random.SeedSequence([int(seed) & (2**64 - 1), tag])
    return np.random.Generator(np.random.PCG64(ss))


def _prob(p) -> float:
    p = Fraction(p) if not isinstance(p, float) else p
    if not 0 <= p <= 1:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    return float(p)


@dataclass(frozen=True)
class KernelSpec:
    dims: CubeDims
    block: BlockShape
    block_fill_prob: Fraction | float = Fraction(1, 2)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "dims", _as_dims(self.dims))
        _prob(self.block_fill_prob)


@dataclass(frozen=True)
class NoiseSpec:
    flip_prob: Fraction | float = Fraction(3, 100)
    seed: int = 0

    def __post_init__(self):
        _prob(self.flip_prob)


def kernel_cube(spec: KernelSpec) -> SparseCube:
    """Cube whose every block is independently full (``block_fill_prob``) or empty."""
    dims, block = spec.dims, spec.block
    block.check(dims)
    grid = _grid_shape(dims, block)
    rng = rng_for(spec.seed, _TAG_KERNEL)
    full = rng.random(grid) < _prob(spec.block_fill_prob)
    # expand each block to its cells, clipped at the upper boundary
    dense = full
    for j, m in enumerate(block.extents):
        dense = np.repeat(dense, m, axis=j)
    dense = dense[tuple(slice(0, n) for n in dims.extents)]
    return SparseCube(dims, np.argwhere(dense), _trusted=True)


def is_kernel(cube: SparseCube, block: BlockShape) -> bool:
    """True when every block is either empty or completely full."""
    origins, counts = block_counts(cube, block)
    return bool(np.array_equal(counts, _block_volumes(cube.dims, block, origins)))


def add_noise(cube: SparseCube, spec: NoiseSpec) -> SparseCube:
    """Invert each cell's allocation status independently with ``flip_prob``."""
    rng = rng_for(spec.seed, _TAG_NOISE)
    flip = rng.random(cube.dims.extents) < _prob(spec.flip_prob)
    return SparseCube(cube.dims, np.argwhere(cube.to_dense() ^ flip), _trusted=True)


def random_normalization(dims, seed) -> Normalization:
    """Independent uniform permutation per dimension (Fisher-Yates)."""
    dims = _as_dims(dims)
    rng = rng_for(seed, _TAG_PERM)
    return Normalization([Permutation(rng.permutation(n)) for n in dims.extents])
