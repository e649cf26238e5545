"""Versioned JSON scene documents consumed by the viewer and by tests.

Scenes are self-contained: positions and connectivity as flat numeric
lists, quality, glyphs and clusters, feature edges, overlap incidents,
and (optionally) boundary-error data. Serialization is deterministic:
fixed key order, shortest round-trip float formatting, no timestamps.
"""

from __future__ import annotations

import json

import numpy as np

from . import __version__
from .boundary import BoundaryCurve, BoundaryErrorRecord, CollatedSeries, SurfaceErrorField
from .feature_edges import FeatureEdgeSet
from .glyphs import ClusterSummary, Glyph, GlyphParams
from .mesh_io import Adjacency, Mesh
from .overlap import OverlapReport
from .quality import QualityField, QualityHistogram

SCHEMA_VERSION = 1


def _floats(a) -> list:
    return [float(x) for x in np.asarray(a).ravel()]


def _ints(a) -> list:
    return [int(x) for x in np.asarray(a).ravel()]


def build_scene(
    mesh: Mesh,
    adjacency: Adjacency,
    field: QualityField,
    histogram: QualityHistogram,
    params: GlyphParams,
    glyphs: list[Glyph],
    clusters: list[ClusterSummary],
    features: FeatureEdgeSet,
    overlaps: OverlapReport,
    boundary: dict | None = None,
    provenance: dict | None = None,
) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "scene",
        "model": mesh.name,
        "mesh": {
            "dimension": mesh.dimension,
            "arity": mesh.arity,
            "vertex_count": mesh.n_vertices,
            "cell_count": mesh.n_cells,
            "positions": _floats(mesh.vertices),
            "cells": _ints(mesh.cells),
            "edges": _ints(adjacency.edges),
            "boundary_quads": _ints(adjacency.faces[adjacency.boundary_face_indices()])
            if mesh.dimension == 3
            else [],
            "average_edge_length": float(adjacency.average_edge_length),
            "bbox_min": _floats(adjacency.bbox_min),
            "bbox_max": _floats(adjacency.bbox_max),
            "diagonal": float(adjacency.diagonal),
        },
        "quality": {
            "vertex_quality": _floats(field.vertex_quality),
            "corner_offsets": _ints(field.corner_offsets),
            "corner_cells": _ints(field.corner_cells),
            "corner_values": _floats(field.corner_values),
            "q_m": float(field.q_m),
            "worst": float(field.vertex_quality.min()) if field.n_vertices else 1.0,
            "histogram": {
                "bin_edges": _floats(histogram.bin_edges),
                "counts": _ints(histogram.counts),
            },
            "sorted_vertices": _ints(histogram.sorted_vertices),
        },
        "glyphs": {
            "params": {"r_max": float(params.r_max), "r_dmin": float(params.r_dmin)},
            "displayed": [
                {
                    "vertex": g.vertex,
                    "center": list(g.center),
                    "c": g.c,
                    "radius": g.radius,
                }
                for g in glyphs
            ],
            "clusters": [
                {
                    "id": c.cluster_id,
                    "members": list(c.members),
                    "representative": c.representative,
                    "radius": c.aggregated_radius,
                    "worst_quality": c.worst_quality,
                    "member_count": c.member_count,
                    "color_index": c.color_index,
                }
                for c in clusters
            ],
        },
        "feature_edges": {
            "e_qmax": float(features.e_qmax),
            "emphasized": _ints(features.emphasized),
        },
        "overlaps": {
            "vertex_pairs": [[int(u), int(v), float(d)] for u, v, d in overlaps.vertex_pairs],
            "containments": [[int(v), int(c)] for v, c in overlaps.containments],
            "arrows": [
                {
                    "vertex": a.vertex,
                    "direction": list(a.direction),
                    "angle_deg": a.angle_deg,
                }
                for a in overlaps.arrows
            ],
        },
        "boundary": boundary,
        "provenance": provenance or {},
    }
    doc["provenance"].setdefault("tool_version", __version__)
    return doc


def boundary_section_2d(
    loops: list[BoundaryCurve],
    records: list[BoundaryErrorRecord],
    series: list,
    collated: CollatedSeries,
    diag_reference: float,
) -> dict:
    return {
        "mode": "2d",
        "signed": True,
        "diag_reference": float(diag_reference),
        "loops": [
            {
                "vertices": _ints(verts),
                "arclength": _floats(arc),
                "errors": _floats(errs),
            }
            for verts, arc, errs in series
        ],
        "records": _records(records),
        "collated": _collated(collated),
        "uv": None,
        "surface_quads": [],
    }


def boundary_section_3d(
    field: SurfaceErrorField, collated: CollatedSeries, diag_reference: float
) -> dict:
    return {
        "mode": "3d",
        "signed": bool(field.signed),
        "diag_reference": float(diag_reference),
        "loops": [],
        "records": _records(list(field.records)),
        "collated": _collated(collated),
        "uv": _floats(field.uv) if field.uv is not None else None,
        "surface_quads": _ints(field.surface.quads),
    }


def _records(records: list[BoundaryErrorRecord]) -> list:
    return [
        {"vertex": r.vertex, "closest": list(r.closest_point), "error": r.error}
        for r in records
    ]


def _collated(c: CollatedSeries) -> dict:
    return {
        "values": _floats(c.values),
        "percentiles": _floats(c.percentiles),
        "vertices": _ints(c.vertices),
    }


def build_compare(scene_a: dict, scene_b: dict, label_a: str, label_b: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "compare",
        "model": scene_a["model"],
        "labels": [label_a, label_b],
        "scenes": [scene_a, scene_b],
        "camera_hints": {"sync": True},
    }


def dumps_scene(doc: dict) -> str:
    """Canonical serialization; serialize -> parse -> serialize is stable."""
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def loads_scene(text: str) -> dict:
    doc = json.loads(text)
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {version}")
    return doc


def write_scene(doc: dict, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_scene(doc))


def read_scene(path: str) -> dict:
    with open(path) as fh:
        return loads_scene(fh.read())
