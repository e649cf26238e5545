"""Per-corner scaled Jacobians and per-vertex quality.

A hex corner's scaled Jacobian is the determinant of the three normalized
edge vectors leaving the corner, taken in the right-handed order implied
by the VTK corner convention; a quad corner's is the signed parallelogram
area (z of the 2D cross product) of its two normalized edges. Values live
in [-1, 1]; 1 is the ideal corner, <= 0 means degenerate or inverted.
A vertex's quality J_m is the minimum over the corners located at it,
one per incident cell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mesh_io import Adjacency, Mesh

# For VTK hex corner i, the three neighbor corners whose edges form a
# right-handed frame on an untransformed unit cube.
HEX_CORNER_NEIGHBORS = (
    (1, 3, 4),
    (2, 0, 5),
    (3, 1, 6),
    (0, 2, 7),
    (7, 5, 0),
    (4, 6, 1),
    (5, 7, 2),
    (6, 4, 3),
)

DEGENERATE_EDGE = 1e-30


@dataclass(frozen=True)
class QualityField:
    """Corner Jacobians grouped per vertex, plus the per-vertex minimum.

    ``corner_cells``/``corner_values`` are flat arrays sorted by
    (vertex, cell); ``corner_offsets`` delimits each vertex's slice.
    Vertices with no incident cell get J_m = 1.0.
    """

    corner_offsets: np.ndarray  # (n_vertices + 1,)
    corner_cells: np.ndarray
    corner_values: np.ndarray
    vertex_quality: np.ndarray  # J_m per vertex
    q_m: float  # median of vertex_quality

    def corner_jacobians(self, vertex: int) -> list[tuple[int, float]]:
        """(cell id, J) pairs for the corners at ``vertex``, by cell id."""
        lo, hi = self.corner_offsets[vertex], self.corner_offsets[vertex + 1]
        return [
            (int(c), float(j))
            for c, j in zip(self.corner_cells[lo:hi], self.corner_values[lo:hi])
        ]

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_quality)


@dataclass(frozen=True)
class QualityHistogram:
    """Uniform histogram of J_m over [-1, 1] plus the quality-sorted order."""

    bin_edges: np.ndarray
    counts: np.ndarray
    sorted_vertices: np.ndarray  # ascending J_m, ties by vertex id


def _corner_dets_hex(points: np.ndarray) -> np.ndarray:
    """Scaled Jacobians at all 8 corners of each hex. points: (m, 8, 3)."""
    m = len(points)
    out = np.empty((m, 8), dtype=np.float64)
    for i, (n1, n2, n3) in enumerate(HEX_CORNER_NEIGHBORS):
        e1 = points[:, n1] - points[:, i]
        e2 = points[:, n2] - points[:, i]
        e3 = points[:, n3] - points[:, i]
        l1 = np.linalg.norm(e1, axis=1)
        l2 = np.linalg.norm(e2, axis=1)
        l3 = np.linalg.norm(e3, axis=1)
        det = np.einsum("ij,ij->i", np.cross(e1, e2), e3)
        denom = l1 * l2 * l3
        bad = (l1 < DEGENERATE_EDGE) | (l2 < DEGENERATE_EDGE) | (l3 < DEGENERATE_EDGE)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = det / denom
        val[bad] = -1.0
        out[:, i] = np.clip(val, -1.0, 1.0)
    return out


def _corner_dets_quad(points: np.ndarray) -> np.ndarray:
    """Scaled Jacobians at all 4 corners of each quad. points: (m, 4, 3)."""
    m = len(points)
    out = np.empty((m, 4), dtype=np.float64)
    for i in range(4):
        e1 = points[:, (i + 1) % 4] - points[:, i]
        e2 = points[:, (i - 1) % 4] - points[:, i]
        l1 = np.linalg.norm(e1, axis=1)
        l2 = np.linalg.norm(e2, axis=1)
        cross_z = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
        bad = (l1 < DEGENERATE_EDGE) | (l2 < DEGENERATE_EDGE)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = cross_z / (l1 * l2)
        val[bad] = -1.0
        out[:, i] = np.clip(val, -1.0, 1.0)
    return out


def all_corner_jacobians(mesh: Mesh) -> np.ndarray:
    """(n_cells, arity) scaled Jacobians for every corner of every cell."""
    points = mesh.vertices[mesh.cells]
    if mesh.dimension == 3:
        return _corner_dets_hex(points)
    return _corner_dets_quad(points)


def corner_scaled_jacobian(mesh: Mesh, cell: int, corner: int) -> float:
    """Scaled Jacobian at one corner of one cell, clamped to [-1, 1]."""
    if not 0 <= cell < mesh.n_cells:
        raise IndexError(f"cell {cell} out of range")
    if not 0 <= corner < mesh.arity:
        raise IndexError(f"corner {corner} out of range")
    points = mesh.vertices[mesh.cells[cell : cell + 1]]
    if mesh.dimension == 3:
        return float(_corner_dets_hex(points)[0, corner])
    return float(_corner_dets_quad(points)[0, corner])


def compute_quality_field(mesh: Mesh, adjacency: Adjacency) -> QualityField:
    """Per-vertex corner Jacobians and J_m = min over corners at the vertex."""
    corner_j = all_corner_jacobians(mesh)  # (m, arity)
    n = mesh.n_vertices
    verts = mesh.cells.ravel()
    cells = np.repeat(np.arange(mesh.n_cells, dtype=np.int64), mesh.arity)
    vals = corner_j.ravel()

    order = np.lexsort((cells, verts))
    verts_s = verts[order]
    cells_s = cells[order]
    vals_s = vals[order]
    offsets = np.searchsorted(verts_s, np.arange(n + 1))

    jm = np.full(n, np.inf)
    np.minimum.at(jm, verts, vals)
    jm[np.isinf(jm)] = 1.0  # isolated vertices

    q_m = float(np.median(jm)) if n else 1.0
    return QualityField(
        corner_offsets=offsets,
        corner_cells=cells_s,
        corner_values=vals_s,
        vertex_quality=jm,
        q_m=q_m,
    )


def quality_histogram(field: QualityField, bins: int) -> QualityHistogram:
    """Histogram of J_m over uniform bins spanning [-1, 1].

    A value on an interior bin edge goes to the upper bin; the top edge
    is inclusive. Sort ties break by ascending vertex id.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    q = field.vertex_quality
    edges = np.linspace(-1.0, 1.0, bins + 1)
    idx = np.clip(np.floor((q + 1.0) / 2.0 * bins).astype(np.int64), 0, bins - 1)
    counts = np.bincount(idx, minlength=bins) if len(q) else np.zeros(bins, dtype=np.int64)
    order = np.lexsort((np.arange(len(q)), q))
    return QualityHistogram(bin_edges=edges, counts=counts, sorted_vertices=order)
