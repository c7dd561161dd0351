"""Core data object: a rectilinear layout of root cells, each refined by a tree.

A grid is built once (`build_grid`) and never mutated afterwards; every filter
in this package is a pure function over a built grid, so any number of readers
may traverse the same grid concurrently.

Each root cell owns a `HyperTree` encoded as a breadth-first bitstream: one bit
per cell, ``1`` for a refined cell (which then has ``f**d`` children on the
next level) and ``0`` for a leaf. Cells of one tree are numbered by their
position in that bitstream (the "BFS index"); cells of the whole grid carry a
global Id obtained by offsetting the BFS index with the cell counts of all
preceding trees.

Child ordering within a refined cell is row-major over the f x f (x f) block
with the x axis varying fastest, so child ``c`` has per-axis digits
``(c % f, (c // f) % f, ...)``.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BadAxisCoordinates,
    DescriptorLengthMismatch,
    FieldLengthMismatch,
    IndexOutOfRange,
    NotRefined,
)

__all__ = [
    "GridSpec",
    "HyperTree",
    "HyperTreeGrid",
    "GridStats",
    "build_grid",
    "grid_stats",
]


@dataclass(frozen=True)
class GridSpec:
    """Shape of the root-cell layout.

    ``axis_coordinates[a]`` holds the ``root_extent[a] + 1`` world coordinates
    of the grid lines along axis ``a``; root cells may therefore be non-cubic.
    Children subdivide each axis of their parent by ``factor`` independently.
    """

    dimension: int
    factor: int
    root_extent: tuple[int, ...]
    axis_coordinates: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        if self.dimension not in (2, 3):
            raise BadAxisCoordinates(f"dimension must be 2 or 3, got {self.dimension}")
        if self.factor not in (2, 3):
            raise BadAxisCoordinates(f"branching factor must be 2 or 3, got {self.factor}")
        object.__setattr__(self, "root_extent", tuple(int(n) for n in self.root_extent))
        object.__setattr__(
            self,
            "axis_coordinates",
            tuple(tuple(float(c) for c in axis) for axis in self.axis_coordinates),
        )
        if len(self.root_extent) != self.dimension or len(self.axis_coordinates) != self.dimension:
            raise BadAxisCoordinates(
                f"expected {self.dimension} axes, got extents {self.root_extent} "
                f"and {len(self.axis_coordinates)} coordinate lists"
            )
        for n, coords in zip(self.root_extent, self.axis_coordinates):
            if n < 1:
                raise BadAxisCoordinates(f"root extent must be >= 1, got {n}")
            if len(coords) != n + 1:
                raise BadAxisCoordinates(
                    f"axis with {n} root cells needs {n + 1} coordinates, got {len(coords)}"
                )
            if any(b <= a for a, b in zip(coords, coords[1:])):
                raise BadAxisCoordinates(f"axis coordinates not strictly increasing: {coords}")

    @property
    def num_trees(self) -> int:
        n = 1
        for e in self.root_extent:
            n *= e
        return n

    @property
    def children_per_cell(self) -> int:
        return self.factor**self.dimension

    @property
    def bounds(self) -> tuple[tuple[float, ...], tuple[float, ...]]:
        """(min corner, max corner) of the whole grid."""
        return (
            tuple(axis[0] for axis in self.axis_coordinates),
            tuple(axis[-1] for axis in self.axis_coordinates),
        )

    def root_coords(self, tree_index: int) -> tuple[int, ...]:
        """Per-axis root-cell coordinates of a tree (row-major, x fastest)."""
        if not 0 <= tree_index < self.num_trees:
            raise IndexOutOfRange(f"tree index {tree_index} out of range")
        coords = []
        rest = tree_index
        for n in self.root_extent:
            coords.append(rest % n)
            rest //= n
        return tuple(coords)

    def tree_index(self, coords: Sequence[int]) -> int:
        idx = 0
        for c, n in zip(reversed(coords), reversed(self.root_extent)):
            if not 0 <= c < n:
                raise IndexOutOfRange(f"root coordinates {tuple(coords)} out of range")
            idx = idx * n + c
        return idx

    def root_box(self, tree_index: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
        """(origin, size) of a root cell in world units."""
        coords = self.root_coords(tree_index)
        origin = tuple(self.axis_coordinates[a][c] for a, c in enumerate(coords))
        size = tuple(
            self.axis_coordinates[a][c + 1] - self.axis_coordinates[a][c]
            for a, c in enumerate(coords)
        )
        return origin, size


class HyperTree:
    """Refinement tree of one root cell, decoded from its breadth-first bitstream.

    Beyond the raw bits this caches, per cell: the BFS index of its first child
    (-1 for leaves), its parent (-1 for the root) and its depth. The
    `first_child`/`refined` plain-list mirrors exist because tree traversal is
    the hot path of every filter and list indexing is markedly faster than
    numpy scalar indexing.
    """

    __slots__ = (
        "bits",
        "level_offsets",
        "cell_count",
        "num_children",
        "refined",
        "first_child",
        "parent",
        "depths",
    )

    def __init__(self, bits: np.ndarray, num_children: int):
        bits = np.asarray(bits, dtype=bool)
        level_offsets = [0]
        start, count = 0, 1
        while True:
            end = start + count
            if end > bits.size:
                raise DescriptorLengthMismatch(
                    f"descriptor ends mid-level: needed {end} bits, have {bits.size}"
                )
            level_offsets.append(end)
            refined_here = int(np.count_nonzero(bits[start:end]))
            count = refined_here * num_children
            start = end
            if count == 0:
                break
        if start != bits.size:
            raise DescriptorLengthMismatch(
                f"descriptor has {bits.size} bits but the level recurrence consumes {start}"
            )

        self.bits = bits
        self.level_offsets = level_offsets
        self.cell_count = bits.size
        self.num_children = num_children

        first_child = np.full(bits.size, -1, dtype=np.int64)
        parent = np.full(bits.size, -1, dtype=np.int64)
        depths = np.empty(bits.size, dtype=np.int16)
        for depth in range(len(level_offsets) - 1):
            lo, hi = level_offsets[depth], level_offsets[depth + 1]
            depths[lo:hi] = depth
            refined_idx = lo + np.flatnonzero(bits[lo:hi])
            if refined_idx.size:
                starts = hi + np.arange(refined_idx.size, dtype=np.int64) * num_children
                first_child[refined_idx] = starts
                parent[hi : hi + refined_idx.size * num_children] = np.repeat(
                    refined_idx, num_children
                )
        self.first_child: list[int] = first_child.tolist()
        self.parent: list[int] = parent.tolist()
        self.refined: list[bool] = bits.tolist()
        self.depths = depths

    @property
    def max_depth(self) -> int:
        return len(self.level_offsets) - 2

    @property
    def leaf_count(self) -> int:
        return self.cell_count - int(np.count_nonzero(self.bits))

    @property
    def descriptor(self) -> str:
        return "".join("1" if b else "0" for b in self.refined)

    def depth_of(self, bfs_index: int) -> int:
        if not 0 <= bfs_index < self.cell_count:
            raise IndexOutOfRange(f"cell index {bfs_index} out of range")
        return int(self.depths[bfs_index])

    def child(self, bfs_index: int, child_index: int) -> int:
        """BFS index of one child of a refined cell."""
        fc = self.first_child[bfs_index]
        if fc < 0:
            raise NotRefined(f"cell {bfs_index} is a leaf")
        if not 0 <= child_index < self.num_children:
            raise IndexOutOfRange(f"child index {child_index} out of range")
        return fc + child_index

    def path_of(self, bfs_index: int) -> tuple[int, ...]:
        """Child indices from the root down to a cell."""
        if not 0 <= bfs_index < self.cell_count:
            raise IndexOutOfRange(f"cell index {bfs_index} out of range")
        path = []
        cur = bfs_index
        while True:
            par = self.parent[cur]
            if par < 0:
                break
            path.append(cur - self.first_child[par])
            cur = par
        path.reverse()
        return tuple(path)


class HyperTreeGrid:
    """Immutable grid: spec + trees + optional mask + cell fields.

    The material mask carries one boolean per cell over global Ids, ``True``
    meaning the cell is hidden (not material). Masked coarse cells hide their
    whole subtree; `effective_mask` folds that in (a cell is effectively
    masked when its own bit or any ancestor's bit is set) and is what the
    filters consult. Fields hold one value per cell, coarse cells included, so
    a coarse cell can stand in for its subtree when rendering is truncated.
    """

    __slots__ = (
        "spec",
        "trees",
        "mask",
        "fields",
        "tree_offsets",
        "total_cells",
        "effective_mask",
        "_tree_eff_mask",
    )

    def __init__(
        self,
        spec: GridSpec,
        trees: Sequence[HyperTree],
        mask: np.ndarray | None = None,
        fields: Mapping[str, np.ndarray] | None = None,
    ):
        if len(trees) != spec.num_trees:
            raise DescriptorLengthMismatch(
                f"expected {spec.num_trees} trees for root extent {spec.root_extent}, "
                f"got {len(trees)}"
            )
        self.spec = spec
        self.trees = tuple(trees)
        offsets = [0]
        for t in self.trees:
            offsets.append(offsets[-1] + t.cell_count)
        self.tree_offsets: list[int] = offsets
        self.total_cells: int = offsets[-1]

        if mask is not None:
            mask = np.asarray(mask, dtype=bool)
            if mask.size != self.total_cells:
                raise FieldLengthMismatch(
                    f"mask has {mask.size} bits for {self.total_cells} cells"
                )
        self.mask = mask

        self.fields: dict[str, np.ndarray] = {}
        for name, values in (fields or {}).items():
            if name in ("depth", "global_id"):
                # reserved: filters emit these as per-quad attributes themselves
                raise ValueError(f"field name {name!r} is reserved")
            arr = np.asarray(values, dtype=np.float64)
            if arr.size != self.total_cells:
                raise FieldLengthMismatch(
                    f"field {name!r} has {arr.size} values for {self.total_cells} cells"
                )
            self.fields[name] = arr

        self.effective_mask = self._propagate_mask() if mask is not None else None
        if self.effective_mask is not None:
            self._tree_eff_mask = [
                self.effective_mask[offsets[t] : offsets[t + 1]].tolist()
                for t in range(len(self.trees))
            ]
        else:
            self._tree_eff_mask = None

    def _propagate_mask(self) -> np.ndarray:
        eff = np.array(self.mask, dtype=bool, copy=True)
        for t, tree in enumerate(self.trees):
            off = self.tree_offsets[t]
            nc = tree.num_children
            for depth in range(len(tree.level_offsets) - 2):
                lo, hi = tree.level_offsets[depth], tree.level_offsets[depth + 1]
                refined_idx = lo + np.flatnonzero(tree.bits[lo:hi])
                if refined_idx.size == 0:
                    continue
                child_lo = off + hi
                child_hi = child_lo + refined_idx.size * nc
                eff[child_lo:child_hi] |= np.repeat(eff[off + refined_idx], nc)
        return eff

    # -- Ids ----------------------------------------------------------------

    def global_id(self, tree_index: int, bfs_index: int) -> int:
        if not 0 <= tree_index < len(self.trees):
            raise IndexOutOfRange(f"tree index {tree_index} out of range")
        if not 0 <= bfs_index < self.trees[tree_index].cell_count:
            raise IndexOutOfRange(
                f"cell index {bfs_index} out of range for tree {tree_index}"
            )
        return self.tree_offsets[tree_index] + bfs_index

    def resolve_id(self, global_id: int) -> tuple[int, int]:
        """Inverse of `global_id`."""
        if not 0 <= global_id < self.total_cells:
            raise IndexOutOfRange(f"global id {global_id} out of range")
        t = bisect_right(self.tree_offsets, global_id) - 1
        return t, global_id - self.tree_offsets[t]

    # -- convenience --------------------------------------------------------

    @property
    def depth_limit(self) -> int:
        return max(t.max_depth for t in self.trees)

    def cell_masked(self, tree_index: int, bfs_index: int) -> bool:
        """Effective mask state (own bit or any ancestor's bit)."""
        if self.effective_mask is None:
            return False
        return bool(self._tree_eff_mask[tree_index][bfs_index])

    def mask_bits_of_tree(self, tree_index: int) -> list[bool] | None:
        """Own-bit mask slice of one tree, or None when the grid is unmasked."""
        if self.mask is None:
            return None
        off = self.tree_offsets[tree_index]
        return self.mask[off : off + self.trees[tree_index].cell_count].tolist()


@dataclass(frozen=True)
class GridStats:
    total_cells: int
    leaf_count: int
    masked_leaf_count: int
    depth_histogram: dict[int, int] = field(default_factory=dict)


def build_grid(
    spec: GridSpec,
    descriptors: Sequence[str],
    mask: str | Sequence[bool] | None = None,
    fields: Mapping[str, Sequence[float]] | None = None,
) -> HyperTreeGrid:
    """Validate and assemble a grid from per-tree descriptor bit strings.

    Descriptor strings contain '0'/'1' characters; whitespace is ignored.
    The mask may be given the same way, one bit per cell over global Ids.
    """
    nc = spec.factor**spec.dimension
    trees = [HyperTree(_parse_bits(d), nc) for d in descriptors]
    mask_arr = None
    if mask is not None:
        mask_arr = _parse_bits(mask) if isinstance(mask, str) else np.asarray(mask, dtype=bool)
    return HyperTreeGrid(spec, trees, mask_arr, fields)


def _parse_bits(text: str | Iterable[bool]) -> np.ndarray:
    if not isinstance(text, str):
        return np.asarray(list(text), dtype=bool)
    data = np.frombuffer("".join(text.split()).encode("ascii"), dtype=np.uint8)
    bad = (data != ord("0")) & (data != ord("1"))
    if bad.any():
        raise DescriptorLengthMismatch(
            f"bit string contains characters other than 0/1 at position {int(np.argmax(bad))}"
        )
    return data == ord("1")


def grid_stats(grid: HyperTreeGrid) -> GridStats:
    """Cell/leaf counts plus a histogram of leaf depths.

    `masked_leaf_count` counts leaves hidden under the effective mask, so
    ``leaf_count - masked_leaf_count`` is the number of renderable leaves.
    """
    leaf_count = 0
    masked_leaves = 0
    hist: dict[int, int] = {}
    for t, tree in enumerate(grid.trees):
        leaves = ~tree.bits
        leaf_count += int(np.count_nonzero(leaves))
        for depth in range(len(tree.level_offsets) - 1):
            lo, hi = tree.level_offsets[depth], tree.level_offsets[depth + 1]
            n = int(np.count_nonzero(leaves[lo:hi]))
            if n:
                hist[depth] = hist.get(depth, 0) + n
        if grid.effective_mask is not None:
            off = grid.tree_offsets[t]
            eff = grid.effective_mask[off : off + tree.cell_count]
            masked_leaves += int(np.count_nonzero(leaves & eff))
    return GridStats(grid.total_cells, leaf_count, masked_leaves, hist)
