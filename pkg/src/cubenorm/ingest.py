"""Relational input and on-disk formats.

Cube text format (LF-terminated, 0-based)::

    dims: n1 n2 ... nd
    i1 i2 ... id
    ...

one allocated cell per line, cells in lexicographic order on export.

Normalization text format: one line per dimension, each a whitespace
separated permutation ``g(0) g(1) ...`` giving, for every position, the source
index placed there.  Blank lines and lines starting with ``#`` are ignored.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .cube import CubeDims, Normalization, SparseCube

__all__ = [
    "RelationSchema",
    "CubeFormatError",
    "load_relation",
    "read_csv",
    "export_cube",
    "import_cube",
    "export_normalization",
    "import_normalization",
    "read_cube",
    "write_cube",
]


class CubeFormatError(ValueError):
    """Malformed cube or normalization payload; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class RelationSchema:
    columns: list[str]
    dictionaries: list[dict[str, int]] = field(default_factory=list)

    def labels(self, dim: int) -> list[str]:
        """Attribute values of ``dim`` in index order."""
        d = self.dictionaries[dim]
        out = [""] * len(d)
        for value, idx in d.items():
            out[idx] = value
        return out


def load_relation(rows: Iterable[Sequence[str]], columns: Sequence[str] | None = None,
                  measure_column: int | None = None) -> tuple[SparseCube, RelationSchema]:
    """Build a cube from tuples using first-seen value ranks as indices.

    The index of a value is the number of distinct values seen in its column
    before its first occurrence.  ``measure_column``, if given, is dropped.
    """
    dicts: list[dict[str, int]] | None = None
    cells: list[tuple[int, ...]] = []
    arity = None
    for lineno, row in enumerate(rows, 1):
        row = list(row)
        if measure_column is not None:
            if not -len(row) <= measure_column < len(row):
                raise ValueError(f"row {lineno} has no column {measure_column}")
            del row[measure_column]
        if arity is None:
            arity = len(row)
            if arity == 0:
                raise ValueError("rows must have at least one attribute")
            dicts = [{} for _ in range(arity)]
        elif len(row) != arity:
            raise ValueError(f"row {lineno} has {len(row)} attributes, expected {arity}")
        cell = []
        for j, v in enumerate(row):
            cell.append(dicts[j].setdefault(v, len(dicts[j])))
        cells.append(tuple(cell))
    if arity is None:
        raise ValueError("no input rows")
    names = list(columns) if columns is not None else [f"a{j}" for j in range(arity)]
    if len(names) != arity:
        raise ValueError(f"{len(names)} column names for {arity} attributes")
    dims = CubeDims(tuple(len(d) for d in dicts))
    return SparseCube(dims, np.array(cells, dtype=np.int64)), RelationSchema(names, dicts)


def read_csv(path, header: bool = False, measure_column: int | None = None) -> tuple[SparseCube, RelationSchema]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        names = None
        if header:
            names = next(reader, None)
            if names is None:
                raise ValueError("no input rows")
            if measure_column is not None:
                names = [c for k, c in enumerate(names) if k != measure_column % len(names)]
        rows = [r for r in reader if r]
    return load_relation(rows, names, measure_column)


def export_cube(cube: SparseCube) -> bytes:
    buf = io.StringIO()
    buf.write("dims: " + " ".join(map(str, cube.dims.extents)) + "\n")
    for row in cube.coords.tolist():
        buf.write(" ".join(map(str, row)) + "\n")
    return buf.getvalue().encode("ascii")


def import_cube(data: bytes | str) -> SparseCube:
    text = data.decode("ascii") if isinstance(data, (bytes, bytearray)) else data
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise CubeFormatError("empty payload", 1)
    head = lines[0].split()
    if not head or head[0] != "dims:":
        raise CubeFormatError("expected 'dims: n1 ... nd'", 1)
    try:
        ext = tuple(int(x) for x in head[1:])
        dims = CubeDims(ext)
    except ValueError as exc:
        raise CubeFormatError(f"bad dims line: {exc}", 1) from None
    cells = []
    for lineno, line in enumerate(lines[1:], 2):
        parts = line.split()
        if len(parts) != dims.d:
            raise CubeFormatError(f"expected {dims.d} coordinates, got {len(parts)}", lineno)
        try:
            cell = tuple(int(x) for x in parts)
        except ValueError:
            raise CubeFormatError(f"non-integer coordinate in {line!r}", lineno) from None
        for j, (c, n) in enumerate(zip(cell, ext)):
            if not 0 <= c < n:
                raise CubeFormatError(f"coordinate {c} out of range in dimension {j} (extent {n})", lineno)
        cells.append(cell)
    return SparseCube(dims, np.array(cells, dtype=np.int64).reshape(len(cells), dims.d))


def export_normalization(norm: Normalization) -> bytes:
    return "".join(" ".join(map(str, p.mapping.tolist())) + "\n" for p in norm.perms).encode("ascii")


def import_normalization(data: bytes | str) -> Normalization:
    text = data.decode("ascii") if isinstance(data, (bytes, bytearray)) else data
    perms = []
    for lineno, line in enumerate(text.split("\n"), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            perms.append([int(x) for x in s.split()])
        except ValueError:
            raise CubeFormatError(f"non-integer entry in {s!r}", lineno) from None
        try:
            Normalization([perms[-1]])
        except ValueError as exc:
            raise CubeFormatError(str(exc), lineno) from None
    if not perms:
        raise CubeFormatError("no permutations found")
    return Normalization(perms)


def read_cube(path) -> SparseCube:
    return import_cube(Path(path).read_bytes())


def write_cube(cube: SparseCube, path) -> None:
    Path(path).write_bytes(export_cube(cube))
