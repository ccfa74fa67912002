"""``cubenorm`` command line."""
from __future__ import annotations

import csv
import io
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

import click

from .cost import BlockShape, CostParams, holap_cost, per_cell_cost
from .cube import CubeDims, SparseCube, apply, density
from .datagen import KernelSpec, NoiseSpec, add_noise, kernel_cube, random_normalization
from .experiment import DatasetSpec, ExperimentConfig, PRESETS, analyze_independence, preset, run_experiment
from .heuristics import HEURISTICS, run_heuristic
from .ingest import (
    CubeFormatError,
    export_cube,
    export_normalization,
    import_normalization,
    read_csv,
    read_cube,
)
from .stats import fs_bound


def _ints(text: str) -> tuple[int, ...]:
    parts = [p for p in re.split(r"[x,\s]+", text.strip()) if p]
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise click.BadParameter(f"expected integers like 2x2x2, got {text!r}") from None


def _shape(text: str, d: int) -> BlockShape:
    ext = _ints(text)
    if len(ext) == 1 and d > 1:
        ext = ext * d
    if len(ext) != d:
        raise click.BadParameter(f"block {text!r} has arity {len(ext)}, cube has {d} dimensions")
    return BlockShape(ext)


def _alpha(text: str) -> CostParams:
    try:
        return CostParams(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(f"bad alpha {text!r}: {exc}") from None


def _load(path: str, header: bool = False) -> SparseCube:
    try:
        if path.lower().endswith(".csv"):
            return read_csv(path, header=header)[0]
        return read_cube(path)
    except (OSError, CubeFormatError, ValueError) as exc:
        raise click.ClickException(f"{path}: {exc}") from None


def _summary(cube: SparseCube, shape: BlockShape, params: CostParams) -> dict:
    out = {
        "cells": cube.n_cells,
        "density": float(density(cube)),
        "H": str(holap_cost(cube, shape, params)),
        "E": str(per_cell_cost(cube, shape, params)),
    }
    if cube.n_cells:
        rep = fs_bound(cube, params)
        out["independence_sum"] = str(rep.independence_sum)
        out["fs_bound"] = str(rep.bound)
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _table(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


@click.group()
def main():
    """Reorder attribute values of data cubes to cut block-coded storage cost."""


@main.command()
@click.argument("cube_path")
@click.option("--heuristic", "-H", type=click.Choice(sorted(HEURISTICS)), default="fs", show_default=True)
@click.option("--block", default="2", show_default=True, help="block shape, e.g. 2x2 or 2 for regular")
@click.option("--alpha", default="1/2", show_default=True)
@click.option("--dim", type=int, default=None, help="size2-exact: only this dimension")
@click.option("--tie-break", type=click.Choice(["index", "crossing"]), default="index", show_default=True)
@click.option("--header", is_flag=True, help="CSV input has a header row")
@click.option("--out", "-o", default=None, help="write the normalization here")
def normalize(cube_path, heuristic, block, alpha, dim, tie_break, header, out):
    """Compute a normalization for CUBE_PATH and report costs before and after."""
    cube = _load(cube_path, header)
    shape = _shape(block, cube.d)
    params = _alpha(alpha)
    if dim is not None and not 0 <= dim < cube.d:
        raise click.BadParameter(f"--dim {dim} out of range for a {cube.d}-d cube")
    norm = run_heuristic(heuristic, cube, params, dim=dim, tie_break=tie_break)
    after = apply(norm, cube)
    if out:
        Path(out).write_bytes(export_normalization(norm))
    report = {"heuristic": heuristic, "block": list(shape.extents), "alpha": str(params.alpha),
              "before": _summary(cube, shape, params), "after": _summary(after, shape, params)}
    click.echo(json.dumps(report, indent=2))


@main.command()
@click.argument("cube_path")
@click.option("--norm", "norm_path", default=None, help="normalization file to apply first")
@click.option("--block", default="2", show_default=True)
@click.option("--alpha", default="1/2", show_default=True)
@click.option("--header", is_flag=True)
def score(cube_path, norm_path, block, alpha, header):
    """Report H, E, density, Independence Sum and the FS bound of a cube."""
    cube = _load(cube_path, header)
    shape = _shape(block, cube.d)
    params = _alpha(alpha)
    if norm_path:
        try:
            norm = import_normalization(Path(norm_path).read_bytes())
            cube = apply(norm, cube)
        except (OSError, ValueError) as exc:
            raise click.ClickException(f"{norm_path}: {exc}") from None
    click.echo(json.dumps(_summary(cube, shape, params), indent=2))


@main.command()
@click.option("--preset", "preset_name", type=click.Choice(sorted(PRESETS)), default=None)
@click.option("--dims", default="12x12x12x12", show_default=True)
@click.option("--kernel-block", default=None, help="kernel block shape (defaults to --block)")
@click.option("--fill", default="1/2", show_default=True, help="probability a kernel block is full")
@click.option("--noise", default="0", show_default=True, help="per-cell flip probability")
@click.option("--cube", "cube_files", multiple=True, help="score these cube files instead of generating")
@click.option("--block", default="2", show_default=True)
@click.option("--alpha", default="1/2", show_default=True)
@click.option("--heuristic", "-H", "heuristics", multiple=True, type=click.Choice(sorted(HEURISTICS)))
@click.option("--runs", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--out", "-o", default=None)
@click.option("--timing", is_flag=True, help="record wall time (report no longer reproducible)")
@click.option("--dump-dir", default=None, help="write each run's cube and normalizations here")
def experiment(preset_name, dims, kernel_block, fill, noise, cube_files, block, alpha, heuristics,
               runs, seed, fmt, out, timing, dump_dir):
    """Run heuristics over many seeded cubes and report cost ratios."""
    heuristics = tuple(heuristics) or ("fs", "gs", "im")
    try:
        if preset_name:
            config = preset(preset_name, runs, seed, heuristics)
        else:
            d_ext = _ints(dims)
            shape = _shape(block, len(d_ext))
            kshape = _shape(kernel_block, len(d_ext)) if kernel_block else shape
            ds = DatasetSpec(d_ext, kshape.extents, Fraction(fill), Fraction(noise), True, tuple(cube_files))
            config = ExperimentConfig("custom", ds, shape.extents, _alpha(alpha).alpha, heuristics, runs, seed)
        report = run_experiment(config, timing=timing, dump_dir=dump_dir)
    except (ValueError, OSError) as exc:
        raise click.ClickException(str(exc)) from None
    _emit(report.to_json() if fmt == "json" else report.to_csv(), out)
    if out:
        for h, agg in report.aggregates().items():
            click.echo(f"{h}: mean ratio {100 * agg['mean']:.1f}% (sd {100 * agg['std']:.1f}) over {agg['runs']} runs")


@main.command("analyze-is")
@click.argument("cube_paths", nargs=-1)
@click.option("--preset", "preset_name", type=click.Choice(sorted(PRESETS)), default=None)
@click.option("--runs", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--block", default="2", show_default=True)
@click.option("--alpha", default="1/2", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv", show_default=True)
@click.option("--out", "-o", default=None)
def analyze_is(cube_paths, preset_name, runs, seed, block, alpha, fmt, out):
    """Tabulate Independence Sum against the FS/IM cost ratio."""
    if cube_paths:
        cubes = [_load(p) for p in cube_paths]
    elif preset_name:
        from .experiment import _run_cubes

        cubes = [c for _, c in _run_cubes(preset(preset_name, runs, seed))]
    else:
        raise click.UsageError("give cube files or --preset")
    params = _alpha(alpha)
    d = cubes[0].d if cubes else 1
    rows = analyze_independence(cubes, _shape(block, d), params)
    _emit(_table(rows, fmt), out)


@main.command()
@click.option("--preset", "preset_name", type=click.Choice(sorted(PRESETS)), default=None)
@click.option("--dims", default="12x12x12x12", show_default=True)
@click.option("--block", default="2", show_default=True, help="kernel block shape")
@click.option("--fill", default="1/2", show_default=True)
@click.option("--noise", default="0", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--scramble/--no-scramble", default=True, show_default=True)
@click.option("--from-csv", "csv_path", default=None, help="build the cube from a CSV relation instead")
@click.option("--header", is_flag=True)
@click.option("--measure-col", type=int, default=None, help="CSV column to discard")
@click.option("--out", "-o", default=None)
def generate(preset_name, dims, block, fill, noise, seed, scramble, csv_path, header, measure_col, out):
    """Write a cube file: a seeded synthetic kernel cube, or a CSV relation."""
    try:
        if csv_path:
            cube = read_csv(csv_path, header=header, measure_column=measure_col)[0]
        else:
            if preset_name:
                p = PRESETS[preset_name]
                d_ext = (12,) * 4
                kshape = BlockShape((p["m"],) * 4)
                fill_p, noise_p = p["fill_prob"], p["noise_prob"]
            else:
                d_ext = _ints(dims)
                kshape = _shape(block, len(d_ext))
                fill_p, noise_p = Fraction(fill), Fraction(noise)
            cube = kernel_cube(KernelSpec(CubeDims(d_ext), kshape, fill_p, seed))
            if noise_p:
                cube = add_noise(cube, NoiseSpec(noise_p, seed))
            if scramble:
                cube = apply(random_normalization(cube.dims, seed), cube)
    except (ValueError, OSError) as exc:
        raise click.ClickException(str(exc)) from None
    data = export_cube(cube)
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.write(data.decode("ascii"))


if __name__ == "__main__":  # pragma: no cover
    main()
