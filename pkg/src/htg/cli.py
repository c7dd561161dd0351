"""Command-line front end.

Commands: ``gen``, ``surface``, ``adaptive``, ``elevate``, ``select-ids``,
``select-locations``, ``stats``. Every run prints one summary line to stdout::

    <command> in=<input cells> out=<output cells> ms=<filter milliseconds>

Exit codes: 0 success, 1 I/O failure, 2 unparsable grid file, 3 bad
parameters, 4 operation not defined for the grid dimension.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import generate, io
from .adaptive import Camera2D, adaptive_surface, surface_for_camera_or_full
from .errors import (
    DimensionMismatch,
    HtgError,
    NonPositiveArgument,
    ParseError,
    UnknownCanonicalGrid,
    WrongDimension,
)
from .grid import grid_stats
from .selection import SelectionMask, SelectionRequest, extract_selected_ids, extract_selected_locations
from .surface import elevate_by_depth

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARSE = 2
EXIT_PARAMS = 3
EXIT_DIMENSION = 4


class _BadParams(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for parse failures
    def error(self, message):
        self.exit(EXIT_PARAMS, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="htg", description="Tree-based AMR grid toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a canonical or random grid file")
    gen.add_argument("name", help="paper2d | paper3d | uniform(d,f,k) | random(d,f,k)")
    gen.add_argument("--seed", default="42")
    gen.add_argument("--mask-density", type=float, default=0.0)
    gen.add_argument("--out", required=True)

    def filter_cmd(name: str, help_: str, camera: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("grid", help="path to a grid file")
        p.add_argument("--out", help="output path (omit to print the summary only)")
        p.add_argument("--format", choices=("obj", "native"), default="native")
        if camera:
            p.add_argument("--camera", required=True, metavar="W,H,Z,S,CX,CY")
        return p

    filter_cmd("surface", "full surface extraction (leaf quads / outer boundary)")
    filter_cmd("adaptive", "view-dependent surface extraction", camera=True)

    elev = filter_cmd("elevate", "2D surface lifted to one height per depth level")
    elev.add_argument("--height-scale", type=float, default=1.0)

    for name, flag, metavar in (
        ("select-ids", "--ids", "ID,ID,..."),
        ("select-locations", "--points", "X,Y[,Z];X,Y[,Z];..."),
    ):
        p = filter_cmd(name, f"selection extraction {flag}")
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument(flag, metavar=metavar)
        group.add_argument(
            f"{flag}-file", metavar="PATH",
            help=f"text document with the same entries as {flag}, one per line",
        )
        p.add_argument("--preserve-topology", action="store_true")
        p.add_argument("--include-masked", action="store_true")

    st = sub.add_parser("stats", help="cell/leaf counts and leaf depth histogram")
    st.add_argument("grid")
    st.add_argument("--out")
    return parser


def _parse_camera(text: str) -> Camera2D:
    parts = text.split(",")
    if len(parts) != 6:
        raise _BadParams(f"--camera needs 6 comma-separated values, got {len(parts)}")
    try:
        w, h, z, s, cx, cy = (float(p) for p in parts)
    except ValueError as exc:
        raise _BadParams(f"bad --camera value: {exc}") from exc
    try:
        return Camera2D(w, h, (cx, cy), z, s)
    except NonPositiveArgument as exc:
        raise _BadParams(str(exc)) from exc


def _parse_ids(text: str) -> tuple[int, ...]:
    try:
        ids = tuple(int(p) for p in text.replace(",", " ").split())
    except ValueError as exc:
        raise _BadParams(f"bad --ids value: {exc}") from exc
    if any(i < 0 for i in ids):
        raise _BadParams("--ids must be non-negative")
    return ids


def _parse_points(text: str) -> tuple[tuple[float, ...], ...]:
    points = []
    for chunk in text.replace("\n", ";").split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            points.append(tuple(float(p) for p in chunk.split(",")))
        except ValueError as exc:
            raise _BadParams(f"bad point {chunk!r}: {exc}") from exc
    return tuple(points)


def _flag_or_file(inline: str | None, path: str | None) -> str:
    return Path(path).read_text() if path else (inline or "")


def _seed(text: str):
    # integer seeds stay integers so documented examples are reproducible
    try:
        return int(text)
    except ValueError:
        return text


def _write_mesh(mesh, out: str | None, fmt: str) -> None:
    if out is None:
        return
    if fmt == "obj":
        if isinstance(mesh, SelectionMask):
            raise _BadParams("selection masks cannot be exported to OBJ; use --format native")
        Path(out).write_text(io.mesh_to_obj(mesh))
    else:
        io.save_mesh(mesh, out)


def _output_size(mesh) -> int:
    if isinstance(mesh, SelectionMask):
        return len(mesh.selected_ids())
    if hasattr(mesh, "quads"):
        return len(mesh.quads)
    return len(mesh.cells)


def _run(args: argparse.Namespace) -> int:
    if args.command == "gen":
        t0 = time.perf_counter()
        grid = generate.generate_named(args.name, _seed(args.seed), args.mask_density)
        ms = (time.perf_counter() - t0) * 1000.0
        io.save_grid(grid, args.out)
        print(f"gen in=0 out={grid.total_cells} ms={ms:.3f}")
        return EXIT_OK

    grid = io.load_grid(args.grid)

    if args.command == "stats":
        t0 = time.perf_counter()
        stats = grid_stats(grid)
        ms = (time.perf_counter() - t0) * 1000.0
        doc = {
            "total_cells": stats.total_cells,
            "leaf_count": stats.leaf_count,
            "masked_leaf_count": stats.masked_leaf_count,
            "depth_histogram": {str(k): v for k, v in sorted(stats.depth_histogram.items())},
        }
        if args.out:
            Path(args.out).write_text(json.dumps(doc, separators=(",", ":")) + "\n")
        print(json.dumps(doc, separators=(",", ":")))
        print(f"stats in={stats.total_cells} out={stats.leaf_count} ms={ms:.3f}")
        return EXIT_OK

    if args.command == "surface":
        t0 = time.perf_counter()
        mesh = surface_for_camera_or_full(grid)
    elif args.command == "adaptive":
        camera = _parse_camera(args.camera)
        t0 = time.perf_counter()
        mesh = adaptive_surface(grid, camera)
    elif args.command == "elevate":
        t0 = time.perf_counter()
        mesh = elevate_by_depth(grid, args.height_scale)
    elif args.command == "select-ids":
        request = SelectionRequest.by_ids(
            _parse_ids(_flag_or_file(args.ids, args.ids_file)),
            preserve_topology=args.preserve_topology,
            include_masked=args.include_masked,
        )
        t0 = time.perf_counter()
        mesh = extract_selected_ids(grid, request)
    elif args.command == "select-locations":
        points = _parse_points(_flag_or_file(args.points, args.points_file))
        request = SelectionRequest.by_locations(
            points,
            preserve_topology=args.preserve_topology,
            include_masked=args.include_masked,
        )
        t0 = time.perf_counter()
        mesh = extract_selected_locations(grid, request)
    else:  # pragma: no cover - argparse guarantees a known command
        raise AssertionError(args.command)
    ms = (time.perf_counter() - t0) * 1000.0

    _write_mesh(mesh, args.out, getattr(args, "format", "native"))
    print(f"{args.command} in={grid.total_cells} out={_output_size(mesh)} ms={ms:.3f}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except (WrongDimension, DimensionMismatch) as exc:
        print(f"htg: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except (_BadParams, UnknownCanonicalGrid, NonPositiveArgument, ValueError) as exc:
        print(f"htg: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except (ParseError, HtgError) as exc:
        print(f"htg: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"htg: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
