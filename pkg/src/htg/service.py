"""Stateless HTTP geometry service for the interactive viewer.

Grids are loaded once at startup and never mutated, so requests are handled
concurrently without shared mutable state; each request carries its own
camera. Surface payloads are flat numeric arrays (interleaved point
coordinates, quad point indices, one scalar per quad) so any renderer can
consume them without a mesh library.

Endpoints::

    GET  /grids                  -> [{name, dimension, factor, root_extent,
                                      total_cells, leaf_count, bounds}, ...]
    POST /grids/{name}/surface   <- {camera: {w,h,z,s,cx,cy}, color_by}
                                 -> {points, quads, values,
                                     stats: {quad_count, depth_cap, elapsed_ms}}

Errors return ``{"error": <code>, "detail": <text>}`` with status 404 for an
unknown grid and 400 for an invalid camera, a 3D grid, or an unknown field.
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path
from typing import Mapping

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .adaptive import Camera2D, adaptive_surface, depth_cap
from .errors import NonPositiveArgument
from .grid import HyperTreeGrid, grid_stats
from .io import load_grid

__all__ = ["create_app", "load_grid_dir", "main"]


class CameraParams(BaseModel):
    w: float
    h: float
    z: float
    s: float
    cx: float
    cy: float


class SurfaceRequest(BaseModel):
    camera: CameraParams
    color_by: str = "depth"


def load_grid_dir(path: str | Path) -> dict[str, HyperTreeGrid]:
    """Load every ``*.json`` grid file in a directory, keyed by file stem."""
    grids = {}
    for p in sorted(Path(path).glob("*.json")):
        grids[p.stem] = load_grid(p)
    return grids


def _error(status: int, code: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "detail": detail})


def create_app(grids: Mapping[str, HyperTreeGrid]) -> FastAPI:
    app = FastAPI(title="htg geometry service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.get("/grids")
    def list_grids():
        out = []
        for name in sorted(grids):
            grid = grids[name]
            stats = grid_stats(grid)
            lo, hi = grid.spec.bounds
            out.append(
                {
                    "name": name,
                    "dimension": grid.spec.dimension,
                    "factor": grid.spec.factor,
                    "root_extent": list(grid.spec.root_extent),
                    "total_cells": stats.total_cells,
                    "leaf_count": stats.leaf_count,
                    "bounds": {"min": list(lo), "max": list(hi)},
                }
            )
        return out

    @app.post("/grids/{name}/surface")
    def surface(name: str, request: SurfaceRequest):
        grid = grids.get(name)
        if grid is None:
            return _error(404, "unknown_grid", f"no grid named {name!r}")
        if grid.spec.dimension != 2:
            return _error(400, "wrong_dimension", "adaptive surface requires a 2D grid")
        c = request.camera
        try:
            camera = Camera2D(c.w, c.h, (c.cx, c.cy), c.z, c.s)
        except NonPositiveArgument as exc:
            return _error(400, "invalid_camera", str(exc))
        if request.color_by != "depth" and request.color_by not in grid.fields:
            return _error(
                400, "unknown_field", f"grid has no field {request.color_by!r}"
            )
        t0 = time.perf_counter()
        mesh = adaptive_surface(grid, camera)
        elapsed_ms = (time.perf_counter() - t0) * 1000.0
        points: list[float] = []
        for p in mesh.points:
            points.extend(p)
        quads: list[int] = []
        for q in mesh.quads:
            quads.extend(q)
        values = [float(v) for v in mesh.cell_attributes[request.color_by]]
        return {
            "points": points,
            "quads": quads,
            "values": values,
            "stats": {
                "quad_count": mesh.quad_count,
                "depth_cap": depth_cap(camera, grid.spec.factor),
                "elapsed_ms": elapsed_ms,
            },
        }

    return app


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="htg-serve", description=__doc__)
    parser.add_argument("--grids", required=True, help="directory of grid .json files")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--host", default="127.0.0.1")
    args = parser.parse_args(argv)

    import uvicorn

    app = create_app(load_grid_dir(args.grids))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
