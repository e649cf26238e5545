"""Overlapping-vertex and overlapping-cell detection with arrow placement.

Overlapping vertices are pairs closer than epsilon_rel times the
bounding-box diagonal (zero-length edges and duplicated free vertices
alike). Overlapping cells are vertices contained in a non-incident cell;
containment tests a centroid-fan tetrahedral decomposition of the hex
(24 tets, 4 per face), which is symmetric under corner relabelings but
approximate for strongly warped cells. Each incident gets highlight
arrows; n arrows at one vertex are spaced exactly 360/n degrees apart in
a deterministic plane.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .mesh_io import HEX_FACES, Adjacency, Mesh
from .spatial import AABBTree, SpatialHash

DEFAULT_EPSILON_REL = 1e-6
BARY_TOL = -1e-12


@dataclass(frozen=True)
class Arrow:
    vertex: int
    direction: tuple  # unit vector in the arrow plane
    angle_deg: float


@dataclass(frozen=True)
class OverlapReport:
    vertex_pairs: tuple  # (u, v, distance) with u < v
    containments: tuple  # (vertex id, containing cell id)
    arrows: tuple  # Arrow


def max_threads() -> int:
    """Internal parallelism cap; HQVIEW_THREADS overrides the CPU count."""
    env = os.environ.get("HQVIEW_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def detect_overlapping_vertices(
    mesh: Mesh, adjacency: Adjacency, epsilon_rel: float = DEFAULT_EPSILON_REL
) -> list[tuple[int, int, float]]:
    """All vertex pairs closer than epsilon_rel * diagonal, u < v.

    Both zero-length edges and unconnected duplicated vertices are the
    same failure mode for solvers, so connectivity is not required.
    """
    if epsilon_rel <= 0:
        raise ValueError("epsilon_rel must be positive")
    threshold = epsilon_rel * adjacency.diagonal
    if threshold <= 0 or mesh.n_vertices < 2:
        return []
    grid = SpatialHash(mesh.vertices, threshold)
    pairs = grid.close_pairs(threshold)
    pairs.sort(key=lambda t: (t[0], t[1]))
    return pairs


def _tets_of_cell(mesh: Mesh, cell: int) -> np.ndarray:
    """Centroid-fan decomposition; (k, 4, 3) tet corner positions."""
    corners = mesh.vertices[mesh.cells[cell]]
    centroid = corners.mean(axis=0)
    tets = []
    if mesh.dimension == 3:
        for loop in HEX_FACES:
            pts = corners[list(loop)]
            fc = pts.mean(axis=0)
            for k in range(4):
                tets.append([centroid, fc, pts[k], pts[(k + 1) % 4]])
    else:
        # Quad analog: 4 triangles fanned from the centroid, lifted with
        # a unit z extent so the same barycentric test applies.
        for k in range(4):
            a, b = corners[k], corners[(k + 1) % 4]
            apex = centroid + np.array([0.0, 0.0, 1.0])
            tets.append([centroid, a, b, apex])
    return np.array(tets)


def _point_in_tets(point: np.ndarray, tets: np.ndarray, planar: bool) -> bool:
    p = np.asarray(point, dtype=np.float64)
    for tet in tets:
        d = tet[3] - tet[0]
        m = np.column_stack([tet[1] - tet[0], tet[2] - tet[0], d])
        try:
            bary = np.linalg.solve(m, p - tet[0])
        except np.linalg.LinAlgError:
            continue
        if planar:
            # z never leaves the quad plane; only the triangle coords count.
            if abs(bary[2]) > 1e-9:
                continue
            coords = (bary[0], bary[1], 1.0 - bary[0] - bary[1])
        else:
            coords = (bary[0], bary[1], bary[2], 1.0 - bary.sum())
        if all(c >= BARY_TOL for c in coords):
            return True
    return False


def point_in_hex(point, mesh: Mesh, cell: int) -> bool:
    """Containment against the tet decomposition of one cell."""
    if not 0 <= cell < mesh.n_cells:
        raise IndexError(f"cell {cell} out of range")
    return _point_in_tets(
        np.asarray(point, dtype=np.float64),
        _tets_of_cell(mesh, cell),
        planar=mesh.dimension == 2,
    )


def detect_overlapping_cells(mesh: Mesh, adjacency: Adjacency) -> list[tuple[int, int]]:
    """(vertex, cell) incidents where the vertex sits inside a non-incident cell."""
    if mesh.n_cells == 0:
        return []
    pts = mesh.vertices[mesh.cells]  # (m, arity, 3)
    tree = AABBTree(pts.min(axis=1), pts.max(axis=1))
    out = []
    for v in range(mesh.n_vertices):
        incident = set(adjacency.vertex_cells[v])
        p = mesh.vertices[v]
        for c in sorted(tree.query_point(p)):
            if c in incident:
                continue
            if point_in_hex(p, mesh, c):
                out.append((v, c))
    return out


def _arrow_plane(mesh: Mesh, adjacency: Adjacency | None, vertex: int) -> tuple:
    """Orthonormal (b1, b2) spanning the arrow plane at a vertex.

    Boundary vertices use the plane orthogonal to the average normal of
    their incidence-1 faces; interior vertices (and 2D meshes) fall back
    to the global XY plane. The basis is camera independent so exported
    angles are reproducible.
    """
    normal = np.array([0.0, 0.0, 1.0])
    if adjacency is not None and mesh.dimension == 3 and len(adjacency.faces):
        acc = np.zeros(3)
        for fi, cs in enumerate(adjacency.face_cells):
            if len(cs) != 1:
                continue
            loop = adjacency.faces[fi]
            if vertex not in loop:
                continue
            pts = mesh.vertices[loop]
            n = np.cross(pts[2] - pts[0], pts[3] - pts[1])
            norm = np.linalg.norm(n)
            if norm > 0:
                acc += n / norm
        if np.linalg.norm(acc) > 1e-12:
            normal = acc / np.linalg.norm(acc)
    axes = np.eye(3)
    ref = axes[int(np.argmin(np.abs(normal)))]
    b1 = ref - np.dot(ref, normal) * normal
    b1 /= np.linalg.norm(b1)
    b2 = np.cross(normal, b1)
    return b1, b2


def place_arrows(
    targets: list[int], mesh: Mesh | None = None, adjacency: Adjacency | None = None
) -> list[Arrow]:
    """One arrow per target occurrence; n arrows at a vertex at k*360/n degrees."""
    counts: dict = {}
    for t in targets:
        counts[t] = counts.get(t, 0) + 1
    arrows = []
    for vertex in sorted(counts):
        n = counts[vertex]
        if mesh is not None:
            b1, b2 = _arrow_plane(mesh, adjacency, vertex)
        else:
            b1, b2 = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
        for k in range(n):
            angle = k * 360.0 / n
            rad = np.deg2rad(angle)
            direction = np.cos(rad) * b1 + np.sin(rad) * b2
            arrows.append(
                Arrow(
                    vertex=int(vertex),
                    direction=tuple(float(x) for x in direction),
                    angle_deg=float(angle),
                )
            )
    return arrows


def analyze_overlaps(
    mesh: Mesh, adjacency: Adjacency, epsilon_rel: float = DEFAULT_EPSILON_REL
) -> OverlapReport:
    """Full overlap report: pairs, containments, and their arrows.

    Each overlapping pair contributes an arrow at both vertices; each
    containment contributes one arrow at the contained vertex.
    """
    pairs = detect_overlapping_vertices(mesh, adjacency, epsilon_rel)
    containments = detect_overlapping_cells(mesh, adjacency)
    targets: list[int] = []
    for u, v, _ in pairs:
        targets.extend((u, v))
    targets.extend(v for v, _ in containments)
    arrows = place_arrows(targets, mesh, adjacency)
    return OverlapReport(
        vertex_pairs=tuple(pairs),
        containments=tuple(containments),
        arrows=tuple(arrows),
    )
