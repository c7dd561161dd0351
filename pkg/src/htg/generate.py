"""Deterministic grid generators: canonical demo grids and seeded random ones.

All generators are pure functions of their arguments. Randomness comes from
`random.Random` seeded with ``"<seed>:<purpose>"`` strings, so the refinement
structure, the mask and the field values each draw from an independent stream
and adding a mask never changes the structure.

The refinement recipe is fixed: a cell at depth ``d`` is refined with
probability ``0.7 * 0.8**d`` until the depth limit, which keeps derived cell
counts stable across releases.

Known generator names:

* ``paper2d``  - binary 2D grid, 2x3 root cells, depth limit 5
* ``paper3d``  - ternary 3D grid, 3x3x2 root cells, depth limit 3
* ``uniform(d,f,k)`` - single root, fully refined to depth ``k``
* ``random(d,f,k)``  - seeded random structure, root layout drawn from the seed
"""

from __future__ import annotations

import random
import re

import numpy as np

from .errors import UnknownCanonicalGrid
from .grid import GridSpec, HyperTree, HyperTreeGrid

__all__ = ["random_grid", "uniform_grid", "paper2d", "paper3d", "generate_named"]

REFINE_P0 = 0.7
REFINE_DECAY = 0.8


def _stream(seed, purpose: str) -> random.Random:
    return random.Random(f"{seed}:{purpose}")


def _random_tree_bits(rng: random.Random, num_children: int, max_depth: int,
                      p0: float, decay: float) -> np.ndarray:
    bits: list[bool] = []
    count, depth = 1, 0
    while count:
        p = p0 * decay**depth if depth < max_depth else -1.0
        level = [rng.random() < p for _ in range(count)]
        bits.extend(level)
        count = sum(level) * num_children
        depth += 1
    return np.array(bits, dtype=bool)


def random_grid(
    dimension: int,
    factor: int,
    *,
    max_depth: int,
    root_extent: tuple[int, ...] | None = None,
    seed=0,
    mask_density: float = 0.0,
    p0: float = REFINE_P0,
    decay: float = REFINE_DECAY,
    irregular_axes: bool = False,
    field_names: tuple[str, ...] = ("density",),
) -> HyperTreeGrid:
    """Seeded random grid; `irregular_axes` draws non-unit root cell widths."""
    if root_extent is None:
        root_extent = (1,) * dimension
    rng_axes = _stream(seed, "axes")
    axes = []
    for n in root_extent:
        if irregular_axes:
            widths = [0.5 + rng_axes.random() for _ in range(n)]
        else:
            widths = [1.0] * n
        coords = [0.0]
        for w in widths:
            coords.append(coords[-1] + w)
        axes.append(tuple(coords))
    spec = GridSpec(dimension, factor, tuple(root_extent), tuple(axes))

    nc = spec.children_per_cell
    rng_structure = _stream(seed, "structure")
    trees = [
        HyperTree(_random_tree_bits(rng_structure, nc, max_depth, p0, decay), nc)
        for _ in range(spec.num_trees)
    ]
    total = sum(t.cell_count for t in trees)

    mask = None
    if mask_density > 0.0:
        rng_mask = _stream(seed, "mask")
        mask = np.array([rng_mask.random() < mask_density for _ in range(total)], dtype=bool)

    fields = {}
    rng_fields = _stream(seed, "fields")
    for name in field_names:
        fields[name] = np.array([rng_fields.random() for _ in range(total)])

    return HyperTreeGrid(spec, trees, mask, fields)


def uniform_grid(dimension: int, factor: int, depth: int) -> HyperTreeGrid:
    """Single unit root cell fully refined to the given depth."""
    nc = factor**dimension
    bits: list[bool] = []
    count = 1
    for d in range(depth + 1):
        bits.extend([d < depth] * count)
        count *= nc
    spec = GridSpec(
        dimension,
        factor,
        (1,) * dimension,
        tuple((0.0, 1.0) for _ in range(dimension)),
    )
    return HyperTreeGrid(spec, [HyperTree(np.array(bits, dtype=bool), nc)])


def paper2d(seed=42, mask_density: float = 0.0) -> HyperTreeGrid:
    """Canonical binary 2D demo grid: 2x3 unit root cells, depth limit 5."""
    return random_grid(2, 2, max_depth=5, root_extent=(2, 3), seed=seed,
                       mask_density=mask_density)


def paper3d(seed=42, mask_density: float = 0.0) -> HyperTreeGrid:
    """Canonical ternary 3D demo grid: 3x3x2 unit root cells, depth limit 3."""
    return random_grid(3, 3, max_depth=3, root_extent=(3, 3, 2), seed=seed,
                       mask_density=mask_density)


_NAME_RE = re.compile(r"^(uniform|random)\((\d+),(\d+),(\d+)\)$")


def generate_named(name: str, seed=42, mask_density: float = 0.0) -> HyperTreeGrid:
    """Build a grid from a generator name like ``paper2d`` or ``uniform(2,2,3)``."""
    if name == "paper2d":
        return paper2d(seed, mask_density)
    if name == "paper3d":
        return paper3d(seed, mask_density)
    m = _NAME_RE.match(name.replace(" ", ""))
    if m:
        kind, d, f, k = m.group(1), int(m.group(2)), int(m.group(3)), int(m.group(4))
        if kind == "uniform":
            return uniform_grid(d, f, k)
        rng = _stream(seed, "layout")
        extent = tuple(rng.randint(1, 3) for _ in range(d))
        return random_grid(d, f, max_depth=k, root_extent=extent, seed=seed,
                           mask_density=mask_density, irregular_axes=True)
    raise UnknownCanonicalGrid(
        f"unknown generator {name!r}; expected paper2d, paper3d, uniform(d,f,k) or random(d,f,k)"
    )
