"""Tree-based AMR grids with view-adaptive surface extraction and selection."""

from .adaptive import (
    Camera2D,
    ViewRect,
    adaptive_surface,
    depth_cap,
    max_depth,
    surface_for_camera_or_full,
    view_rect,
)
from .cursors import (
    GeometricCursor,
    NeighborState,
    VonNeumannSupercursor,
    cursor_root,
    cursor_to_child,
    supercursor_root,
    supercursor_to_child,
)
from .grid import GridSpec, GridStats, HyperTree, HyperTreeGrid, build_grid, grid_stats
from .selection import (
    SelectionMask,
    SelectionRequest,
    UnstructuredMesh,
    extract_selected_ids,
    extract_selected_locations,
)
from .surface import PolyMesh, elevate_by_depth, extract_surface_2d, extract_surface_3d

__version__ = "0.1.0"

__all__ = [
    "Camera2D",
    "GeometricCursor",
    "GridSpec",
    "GridStats",
    "HyperTree",
    "HyperTreeGrid",
    "NeighborState",
    "PolyMesh",
    "SelectionMask",
    "SelectionRequest",
    "UnstructuredMesh",
    "ViewRect",
    "VonNeumannSupercursor",
    "adaptive_surface",
    "build_grid",
    "cursor_root",
    "cursor_to_child",
    "depth_cap",
    "elevate_by_depth",
    "extract_selected_ids",
    "extract_selected_locations",
    "extract_surface_2d",
    "extract_surface_3d",
    "grid_stats",
    "max_depth",
    "supercursor_root",
    "supercursor_to_child",
    "surface_for_camera_or_full",
    "view_rect",
]
