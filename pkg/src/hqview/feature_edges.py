"""Quality-defined feature edges.

An edge is emphasized when both endpoint qualities fall strictly below
the threshold e_qmax, so emphasized edges trace the regions of
poor-quality elements. The default threshold is 0.2 above the median
vertex quality, clamped to 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mesh_io import Adjacency, Mesh
from .quality import QualityField


@dataclass(frozen=True)
class FeatureEdgeSet:
    e_qmax: float
    emphasized: np.ndarray  # edge ids
    deemphasized: np.ndarray  # edge ids; together a partition of all edges


def default_e_qmax(field: QualityField) -> float:
    """min(0.2 + q_m, 1): above 1 every edge would qualify anyway."""
    if field.n_vertices == 0:
        raise ValueError("empty quality field")
    return min(0.2 + field.q_m, 1.0)


def filter_feature_edges(
    mesh: Mesh, adjacency: Adjacency, field: QualityField, e_qmax: float
) -> FeatureEdgeSet:
    edges = adjacency.edges
    if len(edges) == 0:
        empty = np.array([], dtype=np.int64)
        return FeatureEdgeSet(e_qmax=float(e_qmax), emphasized=empty, deemphasized=empty)
    q = field.vertex_quality
    below = (q[edges[:, 0]] < e_qmax) & (q[edges[:, 1]] < e_qmax)
    ids = np.arange(len(edges), dtype=np.int64)
    return FeatureEdgeSet(
        e_qmax=float(e_qmax), emphasized=ids[below], deemphasized=ids[~below]
    )
