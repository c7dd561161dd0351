"""View-dependent surface extraction for 2D grids.

Two camera-driven cuts reduce the work of `extract_surface_2d`:

* cells whose box lies strictly outside the visible world rectangle are
  discarded together with their whole subtree;
* the depth-first descent stops at a depth bound derived from the camera,
  below which a cell would occupy less than `scale_threshold` pixels on
  screen. The bound is ``(log(w*z) - log(s)) / log(f)`` for window width
  ``w``, zoom ``z``, threshold ``s`` and branching factor ``f``; it depends
  on ``w`` and ``z`` only through their product and decreases when ``s``
  grows. A refined cell reached at the bound is emitted as a single quad in
  place of its subtree, using its own mask bit and attribute values.

Cameras use a parallel projection: ``zoom == 1`` means the grid's full x
extent spans the window width. 3D input falls back to the full outer-surface
extraction; no view culling is attempted there.

Everything here is a pure function of (immutable grid, camera value), so
concurrent calls with different cameras over one grid are safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonPositiveArgument, WrongDimension
from .grid import HyperTreeGrid
from .surface import PolyMesh, _new_mesh, extract_surface_2d, extract_surface_3d

__all__ = [
    "Camera2D",
    "ViewRect",
    "max_depth",
    "depth_cap",
    "view_rect",
    "adaptive_surface",
    "surface_for_camera_or_full",
]


@dataclass(frozen=True)
class Camera2D:
    """Parallel-projection view: window pixels, world center, zoom, pixel threshold."""

    window_w: float
    window_h: float
    center: tuple[float, float]
    zoom: float
    scale_threshold: float

    def __post_init__(self) -> None:
        if self.window_w < 1 or self.window_h < 1:
            raise NonPositiveArgument(
                f"window must be at least 1x1 pixels, got {self.window_w}x{self.window_h}"
            )
        if self.zoom <= 0:
            raise NonPositiveArgument(f"zoom must be positive, got {self.zoom}")
        if self.scale_threshold <= 0:
            raise NonPositiveArgument(
                f"scale threshold must be positive, got {self.scale_threshold}"
            )


@dataclass(frozen=True)
class ViewRect:
    min: tuple[float, float]
    max: tuple[float, float]


def max_depth(w: float, z: float, s: float, f: int) -> float:
    """Depth below which a cell spans fewer than ``s`` pixels; may be fractional."""
    if w * z <= 0 or s <= 0:
        raise NonPositiveArgument("w*z and s must be positive")
    if f < 2:
        raise NonPositiveArgument(f"branching factor must be >= 2, got {f}")
    return (math.log(w * z) - math.log(s)) / math.log(f)


def depth_cap(camera: Camera2D, f: int) -> int:
    """Deepest level the adaptive descent may reach (floor of the real bound)."""
    return max(0, math.floor(max_depth(camera.window_w, camera.zoom, camera.scale_threshold, f)))


def view_rect(camera: Camera2D, grid: HyperTreeGrid) -> ViewRect:
    """Visible world rectangle of the camera over a 2D grid."""
    if grid.spec.dimension != 2:
        raise WrongDimension("view_rect requires a 2-dimensional grid")
    lo, hi = grid.spec.bounds
    pixels_per_unit = camera.window_w * camera.zoom / (hi[0] - lo[0])
    half_w = camera.window_w / (2.0 * pixels_per_unit)
    half_h = camera.window_h / (2.0 * pixels_per_unit)
    cx, cy = camera.center
    return ViewRect((cx - half_w, cy - half_h), (cx + half_w, cy + half_h))


def adaptive_surface(grid: HyperTreeGrid, camera: Camera2D) -> PolyMesh:
    """Camera-aware leaf quads: frustum-culled and depth-capped (2D).

    Intersection with the view rectangle is closed, so cells touching its
    edge are kept; that avoids popping during pans. 3D grids return the plain
    outer surface unchanged.
    """
    if grid.spec.dimension == 3:
        return extract_surface_3d(grid)
    cap = depth_cap(camera, grid.spec.factor)
    rect = view_rect(camera, grid)
    (rminx, rminy), (rmaxx, rmaxy) = rect.min, rect.max

    mesh = _new_mesh(grid, 2)
    f = grid.spec.factor
    points = mesh.points
    quads = mesh.quads
    depth_attr = mesh.cell_attributes["depth"]
    gid_attr = mesh.cell_attributes["global_id"]
    field_names = list(grid.fields)

    for t, tree in enumerate(grid.trees):
        first_child = tree.first_child
        own_mask = grid.mask_bits_of_tree(t)
        offset = grid.tree_offsets[t]
        field_cols = [
            (mesh.cell_attributes[name], grid.fields[name][offset : offset + tree.cell_count].tolist())
            for name in field_names
        ]

        def emit(bfs: int, depth: int, ox: float, oy: float, sx: float, sy: float) -> None:
            base = len(points)
            points.append((ox, oy))
            points.append((ox + sx, oy))
            points.append((ox + sx, oy + sy))
            points.append((ox, oy + sy))
            quads.append((base, base + 1, base + 2, base + 3))
            depth_attr.append(depth)
            gid_attr.append(offset + bfs)
            for col, values in field_cols:
                col.append(values[bfs])

        def visit(bfs: int, depth: int, ox: float, oy: float, sx: float, sy: float) -> None:
            if ox + sx < rminx or ox > rmaxx or oy + sy < rminy or oy > rmaxy:
                return
            if own_mask is not None and own_mask[bfs]:
                return
            fc = first_child[bfs]
            if fc < 0 or depth >= cap:
                emit(bfs, depth, ox, oy, sx, sy)
                return
            csx = sx / f
            csy = sy / f
            i = fc
            for dy in range(f):
                for dx in range(f):
                    visit(i, depth + 1, ox + dx * csx, oy + dy * csy, csx, csy)
                    i += 1

        (ox0, oy0), (sx0, sy0) = grid.spec.root_box(t)
        visit(0, 0, ox0, oy0, sx0, sy0)
    return mesh


def surface_for_camera_or_full(grid: HyperTreeGrid, camera: Camera2D | None = None) -> PolyMesh:
    """Dispatch used by the CLI and the service: adaptive when a camera is given."""
    if camera is not None:
        return adaptive_surface(grid, camera)
    if grid.spec.dimension == 2:
        return extract_surface_2d(grid)
    return extract_surface_3d(grid)
