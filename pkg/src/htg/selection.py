"""Cell selection by world-space location or by global Id.

Location queries descend to leaf cells; a leaf is selected when at least one
query point falls in its half-open box ``[origin, origin + size)`` (the grid's
outermost upper faces count as closed, so every in-bounds point selects
exactly one leaf per grid). Id queries may select coarse cells: the search
compares a cell's global Id before recursing and stops descending once it
matches, so an Id list containing a refined cell yields that single coarse
cell rather than its leaves.

Masked cells are skipped by default; `include_masked=True` lets them be
selected, which is deliberate (masked regions are still addressable data).

Both queries can either return the selection as a bit mask over global Ids
(`preserve_topology=True`) or extract the selected cells into an unstructured
mesh of quads (2D) or hexahedra (3D).
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .cursors import GeometricCursor, cursor_root, cursor_to_child, digits_to_child
from .errors import DimensionMismatch
from .grid import HyperTreeGrid

__all__ = [
    "SelectionRequest",
    "SelectionMask",
    "UnstructuredMesh",
    "SelectionOutput",
    "extract_selected_locations",
    "extract_selected_ids",
]


@dataclass(frozen=True)
class SelectionRequest:
    """Either a list of world-space points or a list of global cell Ids."""

    locations: tuple[tuple[float, ...], ...] | None = None
    ids: tuple[int, ...] | None = None
    preserve_topology: bool = False
    include_masked: bool = False

    def __post_init__(self) -> None:
        if (self.locations is None) == (self.ids is None):
            raise ValueError("exactly one of locations/ids must be given")
        if self.locations is not None:
            object.__setattr__(
                self, "locations", tuple(tuple(float(c) for c in p) for p in self.locations)
            )
        if self.ids is not None:
            ids = tuple(int(i) for i in self.ids)
            if any(i < 0 for i in ids):
                raise ValueError("cell Ids must be non-negative")
            object.__setattr__(self, "ids", ids)

    @classmethod
    def by_locations(cls, points, *, preserve_topology=False, include_masked=False):
        return cls(locations=tuple(tuple(p) for p in points),
                   preserve_topology=preserve_topology, include_masked=include_masked)

    @classmethod
    def by_ids(cls, ids, *, preserve_topology=False, include_masked=False):
        return cls(ids=tuple(ids), preserve_topology=preserve_topology,
                   include_masked=include_masked)


@dataclass
class SelectionMask:
    """One bit per cell over global Ids: 1 selected, 0 not selected."""

    bits: np.ndarray

    def selected_ids(self) -> list[int]:
        return np.flatnonzero(self.bits).tolist()


@dataclass
class UnstructuredMesh:
    """Extracted cells: quads in 2D, hexahedra in 3D.

    Points are deduplicated by exact coordinate. Hexahedron corners are listed
    bottom face counter-clockwise (z low) then top face in the same x/y order.
    """

    cell_type: str  # "quad" | "hexahedron"
    points: list[tuple[float, ...]] = field(default_factory=list)
    cells: list[tuple[int, ...]] = field(default_factory=list)
    cell_attributes: dict[str, list] = field(default_factory=dict)

    @property
    def cell_count(self) -> int:
        return len(self.cells)


SelectionOutput = Union[SelectionMask, UnstructuredMesh]


def _locate_leaf(grid: HyperTreeGrid, point: tuple[float, ...]) -> GeometricCursor | None:
    """Leaf cell containing a point under the half-open rule, or None."""
    spec = grid.spec
    f = spec.factor
    coords: list[int] = []
    for a, x in enumerate(point):
        axis = spec.axis_coordinates[a]
        if x < axis[0] or x > axis[-1]:
            return None
        if x == axis[-1]:  # outermost upper face is closed
            i = len(axis) - 2
        else:
            i = bisect_right(axis, x) - 1
        coords.append(i)
    cur = cursor_root(grid, spec.tree_index(coords))
    tree = grid.trees[cur.tree_index]
    while tree.first_child[cur.bfs_index] >= 0:
        digits = []
        for a, x in enumerate(point):
            child_size = cur.size[a] / f
            d = int((x - cur.origin[a]) / child_size)
            digits.append(min(d, f - 1))
        cur = cursor_to_child(cur, digits_to_child(tuple(digits), f))
    return cur


def _select_locations(grid: HyperTreeGrid, request: SelectionRequest) -> dict[int, GeometricCursor]:
    if any(len(p) != grid.spec.dimension for p in request.locations):
        raise DimensionMismatch(
            f"query points must have {grid.spec.dimension} coordinates"
        )
    selected: dict[int, GeometricCursor] = {}
    for point in request.locations:
        cur = _locate_leaf(grid, point)
        if cur is None:
            continue
        if not request.include_masked and cur.masked:
            continue
        selected[cur.global_id] = cur
    return selected


def _select_ids(grid: HyperTreeGrid, request: SelectionRequest) -> dict[int, GeometricCursor]:
    wanted = set(request.ids)
    selected: dict[int, GeometricCursor] = {}
    if not wanted:
        return selected
    for t, tree in enumerate(grid.trees):
        offset = grid.tree_offsets[t]
        own_mask = grid.mask_bits_of_tree(t)
        include_masked = request.include_masked

        def visit(cur: GeometricCursor) -> None:
            bfs = cur.bfs_index
            if not include_masked and own_mask is not None and own_mask[bfs]:
                return
            gid = offset + bfs
            if gid in wanted:
                selected[gid] = cur  # match found: do not descend further
                return
            if tree.first_child[bfs] >= 0:
                for i in range(tree.num_children):
                    visit(cursor_to_child(cur, i))

        visit(cursor_root(grid, t))
    return selected


def _materialize(
    grid: HyperTreeGrid, selected: dict[int, GeometricCursor], preserve_topology: bool
) -> SelectionOutput:
    if preserve_topology:
        bits = np.zeros(grid.total_cells, dtype=bool)
        for gid in selected:
            bits[gid] = True
        return SelectionMask(bits)

    dim = grid.spec.dimension
    mesh = UnstructuredMesh(cell_type="quad" if dim == 2 else "hexahedron")
    attrs: dict[str, list] = {"depth": [], "global_id": []}
    for name in grid.fields:
        attrs.setdefault(name, [])
    mesh.cell_attributes = attrs
    point_index: dict[tuple[float, ...], int] = {}

    def add_point(p: tuple[float, ...]) -> int:
        idx = point_index.get(p)
        if idx is None:
            idx = len(mesh.points)
            point_index[p] = idx
            mesh.points.append(p)
        return idx

    for gid in sorted(selected):
        cur = selected[gid]
        o, s = cur.origin, cur.size
        if dim == 2:
            corners = [
                (o[0], o[1]),
                (o[0] + s[0], o[1]),
                (o[0] + s[0], o[1] + s[1]),
                (o[0], o[1] + s[1]),
            ]
        else:
            ring = [
                (o[0], o[1]),
                (o[0] + s[0], o[1]),
                (o[0] + s[0], o[1] + s[1]),
                (o[0], o[1] + s[1]),
            ]
            corners = [(x, y, o[2]) for x, y in ring] + [(x, y, o[2] + s[2]) for x, y in ring]
        mesh.cells.append(tuple(add_point(p) for p in corners))
        attrs["depth"].append(cur.depth)
        attrs["global_id"].append(gid)
        for name in grid.fields:
            attrs[name].append(float(grid.fields[name][gid]))
    return mesh


def extract_selected_locations(grid: HyperTreeGrid, request: SelectionRequest) -> SelectionOutput:
    """Select leaf cells containing any of the query points."""
    if request.locations is None:
        raise ValueError("request does not carry locations")
    selected = _select_locations(grid, request)
    return _materialize(grid, selected, request.preserve_topology)


def extract_selected_ids(grid: HyperTreeGrid, request: SelectionRequest) -> SelectionOutput:
    """Select cells (coarse or leaf) whose global Id appears in the request."""
    if request.ids is None:
        raise ValueError("request does not carry ids")
    selected = _select_ids(grid, request)
    return _materialize(grid, selected, request.preserve_topology)
