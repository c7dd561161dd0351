"""Traversal handles over one tree of a grid.

`GeometricCursor` tracks the box (origin/size), depth and BFS index of the
current cell while descending. `VonNeumannSupercursor` additionally tracks the
2*d face neighbors of the current cell. A neighbor is always reported at a
depth no greater than the center's: when the adjacent subtree is refined at
least as deep as the center, the entry is the neighbor cell at exactly the
center's depth; when it is shallower, the entry is the deepest existing
ancestor cell covering the adjacent region (necessarily a leaf). Neighbors
resolve across root-cell boundaries; `None` marks the outside of the grid.

Cursors are cheap value-like handles over an immutable grid and may be used
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import IndexOutOfRange, NotRefined
from .grid import HyperTreeGrid

__all__ = [
    "GeometricCursor",
    "NeighborState",
    "VonNeumannSupercursor",
    "cursor_root",
    "cursor_to_child",
    "supercursor_root",
    "supercursor_to_child",
    "child_digits",
    "digits_to_child",
]


def child_digits(child_index: int, factor: int, dimension: int) -> tuple[int, ...]:
    """Per-axis digits of a child index (row-major, x fastest)."""
    digits = []
    rest = child_index
    for _ in range(dimension):
        digits.append(rest % factor)
        rest //= factor
    return tuple(digits)


def digits_to_child(digits: tuple[int, ...], factor: int) -> int:
    idx = 0
    for d in reversed(digits):
        idx = idx * factor + d
    return idx


@dataclass(frozen=True)
class GeometricCursor:
    grid: HyperTreeGrid = field(repr=False)
    tree_index: int
    bfs_index: int
    depth: int
    origin: tuple[float, ...]
    size: tuple[float, ...]
    path: tuple[int, ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.grid.trees[self.tree_index].refined[self.bfs_index]

    @property
    def global_id(self) -> int:
        return self.grid.tree_offsets[self.tree_index] + self.bfs_index

    @property
    def masked(self) -> bool:
        """Effective mask state (own bit or any ancestor's)."""
        return self.grid.cell_masked(self.tree_index, self.bfs_index)

    def child(self, child_index: int) -> "GeometricCursor":
        return cursor_to_child(self, child_index)


@dataclass(frozen=True)
class NeighborState:
    """One face neighbor: where it lives and what the filters need to know."""

    tree_index: int
    bfs_index: int
    depth: int
    masked: bool
    is_leaf: bool


@dataclass(frozen=True)
class VonNeumannSupercursor:
    """Center cursor plus its 2*d face neighbors.

    ``neighbors[2*axis + direction]`` with direction 0 for the negative and 1
    for the positive side; `None` means the face lies on the grid boundary.
    """

    center: GeometricCursor
    neighbors: tuple[NeighborState | None, ...]

    def child(self, child_index: int) -> "VonNeumannSupercursor":
        return supercursor_to_child(self, child_index)


def cursor_root(grid: HyperTreeGrid, tree_index: int) -> GeometricCursor:
    """Cursor at depth 0 on the root cell of one tree."""
    origin, size = grid.spec.root_box(tree_index)
    return GeometricCursor(grid, tree_index, 0, 0, origin, size)


def cursor_to_child(cursor: GeometricCursor, child_index: int) -> GeometricCursor:
    grid = cursor.grid
    f = grid.spec.factor
    tree = grid.trees[cursor.tree_index]
    fc = tree.first_child[cursor.bfs_index]
    if fc < 0:
        raise NotRefined(f"cell {cursor.bfs_index} of tree {cursor.tree_index} is a leaf")
    if not 0 <= child_index < tree.num_children:
        raise IndexOutOfRange(f"child index {child_index} out of range")
    digits = child_digits(child_index, f, grid.spec.dimension)
    size = tuple(s / f for s in cursor.size)
    origin = tuple(o + d * s for o, d, s in zip(cursor.origin, digits, size))
    return GeometricCursor(
        grid,
        cursor.tree_index,
        fc + child_index,
        cursor.depth + 1,
        origin,
        size,
        cursor.path + (child_index,),
    )


def _neighbor_state(grid: HyperTreeGrid, tree_index: int, bfs_index: int, depth: int) -> NeighborState:
    tree = grid.trees[tree_index]
    return NeighborState(
        tree_index=tree_index,
        bfs_index=bfs_index,
        depth=depth,
        masked=grid.cell_masked(tree_index, bfs_index),
        is_leaf=not tree.refined[bfs_index],
    )


def supercursor_root(grid: HyperTreeGrid, tree_index: int) -> VonNeumannSupercursor:
    """Supercursor on a root cell; neighbors are the face-adjacent root cells."""
    center = cursor_root(grid, tree_index)
    coords = grid.spec.root_coords(tree_index)
    extent = grid.spec.root_extent
    entries: list[NeighborState | None] = []
    for axis in range(grid.spec.dimension):
        for step in (-1, 1):
            c = coords[axis] + step
            if 0 <= c < extent[axis]:
                other = list(coords)
                other[axis] = c
                t = grid.spec.tree_index(other)
                entries.append(_neighbor_state(grid, t, 0, 0))
            else:
                entries.append(None)
    return VonNeumannSupercursor(center, tuple(entries))


def supercursor_to_child(sc: VonNeumannSupercursor, child_index: int) -> VonNeumannSupercursor:
    """Descend one level, recomputing every face neighbor.

    For each face: a sibling of the new cell when the adjacent region stays
    inside the parent; otherwise derived from the parent's neighbor on that
    side, which is either descended one level (when it is refined at the
    parent's depth), kept as-is (coarser leaf), or remains absent.
    """
    center = sc.center
    grid = center.grid
    f = grid.spec.factor
    d = grid.spec.dimension
    tree = grid.trees[center.tree_index]
    new_center = cursor_to_child(center, child_index)
    digits = child_digits(child_index, f, d)

    entries: list[NeighborState | None] = []
    for axis in range(d):
        for direction, step in ((0, -1), (1, 1)):
            adj = digits[axis] + step
            if 0 <= adj < f:
                sib = digits[:axis] + (adj,) + digits[axis + 1 :]
                bfs = tree.first_child[center.bfs_index] + digits_to_child(sib, f)
                entries.append(
                    _neighbor_state(grid, center.tree_index, bfs, new_center.depth)
                )
                continue
            parent_entry = sc.neighbors[2 * axis + direction]
            if parent_entry is None:
                entries.append(None)
            elif parent_entry.is_leaf or parent_entry.depth < center.depth:
                # Shallower subtree on that side: the leaf keeps covering the
                # (smaller) adjacent region of every descendant of the center.
                entries.append(parent_entry)
            else:
                ntree = grid.trees[parent_entry.tree_index]
                facing = digits[:axis] + (0 if step > 0 else f - 1,) + digits[axis + 1 :]
                bfs = ntree.first_child[parent_entry.bfs_index] + digits_to_child(facing, f)
                entries.append(
                    _neighbor_state(grid, parent_entry.tree_index, bfs, new_center.depth)
                )
    return VonNeumannSupercursor(new_center, tuple(entries))
