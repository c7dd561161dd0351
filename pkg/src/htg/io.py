"""File formats: the versioned grid document, mesh outputs, and OBJ export.

Grid files and native mesh files are single JSON documents; the exact schemas
are documented in ``docs/formats.md``. Serialization is deterministic (fixed
key order, shortest round-trip float formatting), so re-serializing the same
data is byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ParseError
from .grid import GridSpec, HyperTreeGrid, build_grid
from .selection import SelectionMask, UnstructuredMesh
from .surface import PolyMesh

__all__ = [
    "GRID_FORMAT_VERSION",
    "MESH_FORMAT_VERSION",
    "serialize_grid",
    "parse_grid",
    "save_grid",
    "load_grid",
    "serialize_mesh",
    "save_mesh",
    "mesh_to_obj",
]

GRID_FORMAT_VERSION = 1
MESH_FORMAT_VERSION = 1


def _dumps(doc: dict) -> str:
    return json.dumps(doc, separators=(",", ":")) + "\n"


# -- grid files ---------------------------------------------------------------


def serialize_grid(grid: HyperTreeGrid) -> str:
    doc: dict[str, Any] = {
        "version": GRID_FORMAT_VERSION,
        "dimension": grid.spec.dimension,
        "factor": grid.spec.factor,
        "root_extent": list(grid.spec.root_extent),
        "axis_coordinates": [list(axis) for axis in grid.spec.axis_coordinates],
        "trees": [tree.descriptor for tree in grid.trees],
    }
    if grid.mask is not None:
        doc["mask"] = "".join("1" if b else "0" for b in grid.mask)
    if grid.fields:
        doc["fields"] = {name: grid.fields[name].tolist() for name in sorted(grid.fields)}
    return _dumps(doc)


def parse_grid(text: str) -> HyperTreeGrid:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"grid file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("grid file must be a JSON object")
    version = doc.get("version")
    if version != GRID_FORMAT_VERSION:
        raise ParseError(f"unsupported grid format version {version!r}")
    missing = {"dimension", "factor", "root_extent", "axis_coordinates", "trees"} - doc.keys()
    if missing:
        raise ParseError(f"grid file is missing keys: {sorted(missing)}")
    try:
        spec = GridSpec(
            int(doc["dimension"]),
            int(doc["factor"]),
            tuple(doc["root_extent"]),
            tuple(tuple(axis) for axis in doc["axis_coordinates"]),
        )
        return build_grid(spec, doc["trees"], doc.get("mask"), doc.get("fields"))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"malformed grid document: {exc}") from exc


def save_grid(grid: HyperTreeGrid, path: str | Path) -> None:
    Path(path).write_text(serialize_grid(grid))


def load_grid(path: str | Path) -> HyperTreeGrid:
    return parse_grid(Path(path).read_text())


# -- mesh files ---------------------------------------------------------------


def _mesh_document(mesh: PolyMesh | UnstructuredMesh | SelectionMask) -> dict:
    if isinstance(mesh, PolyMesh):
        return {
            "version": MESH_FORMAT_VERSION,
            "kind": "poly",
            "dimension": mesh.dimension,
            "points": [list(p) for p in mesh.points],
            "quads": [list(q) for q in mesh.quads],
            "attributes": {k: list(v) for k, v in mesh.cell_attributes.items()},
        }
    if isinstance(mesh, UnstructuredMesh):
        return {
            "version": MESH_FORMAT_VERSION,
            "kind": "unstructured",
            "cell_type": mesh.cell_type,
            "points": [list(p) for p in mesh.points],
            "cells": [list(c) for c in mesh.cells],
            "attributes": {k: list(v) for k, v in mesh.cell_attributes.items()},
        }
    if isinstance(mesh, SelectionMask):
        return {
            "version": MESH_FORMAT_VERSION,
            "kind": "selection_mask",
            "bits": "".join("1" if b else "0" for b in np.asarray(mesh.bits, dtype=bool)),
        }
    raise TypeError(f"cannot serialize {type(mesh).__name__}")


def serialize_mesh(mesh: PolyMesh | UnstructuredMesh | SelectionMask) -> str:
    return _dumps(_mesh_document(mesh))


def save_mesh(mesh: PolyMesh | UnstructuredMesh | SelectionMask, path: str | Path) -> None:
    Path(path).write_text(serialize_mesh(mesh))


# -- OBJ export ---------------------------------------------------------------

# Face corners of a hexahedron (bottom ring 0-3, top ring 4-7), wound so the
# normals point outward.
_HEX_FACES = (
    (0, 3, 2, 1),
    (4, 5, 6, 7),
    (0, 1, 5, 4),
    (1, 2, 6, 5),
    (2, 3, 7, 6),
    (3, 0, 4, 7),
)


def mesh_to_obj(mesh: PolyMesh | UnstructuredMesh) -> str:
    """Wavefront OBJ text: v/f records, 1-based indices, attributes dropped.

    2D points gain a zero z coordinate; hexahedral cells export their 6 faces.
    """
    lines: list[str] = []
    if isinstance(mesh, PolyMesh):
        points = mesh.points
        faces = mesh.quads
    elif isinstance(mesh, UnstructuredMesh):
        points = mesh.points
        if mesh.cell_type == "quad":
            faces = mesh.cells
        else:
            faces = [
                tuple(cell[i] for i in face) for cell in mesh.cells for face in _HEX_FACES
            ]
    else:
        raise TypeError(f"cannot export {type(mesh).__name__} to OBJ")
    for p in points:
        x, y = p[0], p[1]
        z = p[2] if len(p) > 2 else 0.0
        lines.append(f"v {x!r} {y!r} {z!r}")
    for face in faces:
        lines.append("f " + " ".join(str(i + 1) for i in face))
    return "\n".join(lines) + "\n"
