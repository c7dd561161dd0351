"""Surface extraction without camera input.

2D grids: one axis-aligned quad per renderable leaf (not hidden by the
effective mask), in depth-first order over trees then children, so identical
inputs always produce identical output. 3D grids: the outer boundary only,
found by testing each leaf face against its face neighbor; a face is part of
the surface when there is nothing visible on the other side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .cursors import VonNeumannSupercursor, supercursor_root, supercursor_to_child
from .errors import WrongDimension
from .grid import HyperTreeGrid

__all__ = ["PolyMesh", "extract_surface_2d", "extract_surface_3d", "elevate_by_depth"]


@dataclass
class PolyMesh:
    """Quad soup with per-quad attributes.

    Every quad is a planar axis-aligned rectangle referencing 4 points, wound
    counter-clockwise when seen from its outward normal (+z for 2D cell
    quads). Points are emitted per quad and are not shared between quads.
    `cell_attributes` always carries ``depth`` and ``global_id`` plus one
    array per grid field, aligned with `quads`.
    """

    dimension: int
    points: list[tuple[float, ...]] = field(default_factory=list)
    quads: list[tuple[int, int, int, int]] = field(default_factory=list)
    cell_attributes: dict[str, list] = field(default_factory=dict)

    @property
    def quad_count(self) -> int:
        return len(self.quads)

    def quad_points(self, i: int) -> tuple[tuple[float, ...], ...]:
        return tuple(self.points[j] for j in self.quads[i])


def _new_mesh(grid: HyperTreeGrid, dimension: int) -> PolyMesh:
    attrs: dict[str, list] = {"depth": [], "global_id": []}
    for name in grid.fields:
        attrs.setdefault(name, [])
    return PolyMesh(dimension=dimension, cell_attributes=attrs)


def extract_surface_2d(grid: HyperTreeGrid) -> PolyMesh:
    """All renderable leaf quads of a 2D grid, in DFS order."""
    if grid.spec.dimension != 2:
        raise WrongDimension("extract_surface_2d requires a 2-dimensional grid")
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

        def visit(bfs: int, depth: int, ox: float, oy: float, sx: float, sy: float) -> None:
            if own_mask is not None and own_mask[bfs]:
                return
            fc = first_child[bfs]
            if fc < 0:
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


# Cyclic successor axes: for a face normal along `axis`, the quad spans (u, v)
# with (axis, u, v) a right-handed permutation, so the winding below points
# its normal outward.
_FACE_UV = ((1, 2), (2, 0), (0, 1))


def _emit_face(
    mesh: PolyMesh,
    origin: tuple[float, ...],
    size: tuple[float, ...],
    axis: int,
    positive: bool,
) -> None:
    u, v = _FACE_UV[axis]
    a = origin[axis] + (size[axis] if positive else 0.0)
    p = [0.0, 0.0, 0.0]
    p[axis] = a

    def corner(du: int, dv: int) -> tuple[float, float, float]:
        p[u] = origin[u] + du * size[u]
        p[v] = origin[v] + dv * size[v]
        return (p[0], p[1], p[2])

    base = len(mesh.points)
    if positive:
        mesh.points.extend((corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)))
    else:
        mesh.points.extend((corner(0, 0), corner(0, 1), corner(1, 1), corner(1, 0)))
    mesh.quads.append((base, base + 1, base + 2, base + 3))


@lru_cache(maxsize=None)
def _face_child_offsets(factor: int, dimension: int, axis: int, facing_digit: int) -> tuple[int, ...]:
    """Linear child indices whose block touches the given face of the parent."""
    offsets = []
    for idx in range(factor**dimension):
        digits = []
        rest = idx
        for _ in range(dimension):
            digits.append(rest % factor)
            rest //= factor
        if digits[axis] == facing_digit:
            offsets.append(idx)
    return tuple(offsets)


def _face_subtree_all_masked(
    grid: HyperTreeGrid, tree_index: int, bfs_index: int, axis: int, facing_digit: int
) -> bool:
    """True when no visible leaf of this subtree touches the given face.

    Walks only the children stacked against the face; a cell with its own
    mask bit set hides its subtree, an unmasked leaf means the face region is
    covered by material.
    """
    tree = grid.trees[tree_index]
    own_mask = grid.mask_bits_of_tree(tree_index)
    offsets = _face_child_offsets(grid.spec.factor, grid.spec.dimension, axis, facing_digit)
    stack = [bfs_index]
    while stack:
        bfs = stack.pop()
        fc = tree.first_child[bfs]
        for off in offsets:
            child = fc + off
            if own_mask is not None and own_mask[child]:
                continue
            if tree.first_child[child] < 0:
                return False
            stack.append(child)
    return True


def extract_surface_3d(grid: HyperTreeGrid) -> PolyMesh:
    """Outer boundary of a 3D grid as quads, one per exposed leaf face.

    A leaf face is exposed when the neighbor on that side is absent (grid
    boundary), hidden by the mask, or a refined cell none of whose visible
    leaves reach the shared face. At refinement jumps the finer side emits
    its own sub-faces, so T-junctions stay per-cell.
    """
    if grid.spec.dimension != 3:
        raise WrongDimension("extract_surface_3d requires a 3-dimensional grid")
    mesh = _new_mesh(grid, 3)
    f = grid.spec.factor
    depth_attr = mesh.cell_attributes["depth"]
    gid_attr = mesh.cell_attributes["global_id"]
    field_names = list(grid.fields)

    def visit(sc: VonNeumannSupercursor, own_mask: list[bool] | None, offset: int) -> None:
        center = sc.center
        bfs = center.bfs_index
        if own_mask is not None and own_mask[bfs]:
            return
        tree = grid.trees[center.tree_index]
        if tree.first_child[bfs] >= 0:
            for i in range(tree.num_children):
                visit(supercursor_to_child(sc, i), own_mask, offset)
            return
        for axis in range(3):
            for direction, positive in ((0, False), (1, True)):
                entry = sc.neighbors[2 * axis + direction]
                if entry is None or entry.masked:
                    exposed = True
                elif entry.is_leaf:
                    exposed = False
                else:
                    # Neighbor subtree is finer than the center; the face is
                    # outer only if every facing leaf over there is hidden.
                    # The neighbor's touching children sit on its side facing
                    # back at the center: digit 0 when the center looks at +axis.
                    facing = 0 if positive else f - 1
                    exposed = _face_subtree_all_masked(
                        grid, entry.tree_index, entry.bfs_index, axis, facing
                    )
                if exposed:
                    _emit_face(mesh, center.origin, center.size, axis, positive)
                    depth_attr.append(center.depth)
                    gid_attr.append(offset + bfs)
                    for name in field_names:
                        mesh.cell_attributes[name].append(float(grid.fields[name][offset + bfs]))

    for t in range(len(grid.trees)):
        visit(supercursor_root(grid, t), grid.mask_bits_of_tree(t), grid.tree_offsets[t])
    return mesh


def elevate_by_depth(grid: HyperTreeGrid, height_scale: float) -> PolyMesh:
    """2D surface lifted into 3D, each quad raised to ``depth * height_scale``."""
    flat = extract_surface_2d(grid)
    mesh = PolyMesh(dimension=3, cell_attributes={k: list(v) for k, v in flat.cell_attributes.items()})
    depths = flat.cell_attributes["depth"]
    for i, quad in enumerate(flat.quads):
        z = depths[i] * height_scale
        base = len(mesh.points)
        for j in quad:
            x, y = flat.points[j]
            mesh.points.append((x, y, z))
        mesh.quads.append((base, base + 1, base + 2, base + 3))
    return mesh
