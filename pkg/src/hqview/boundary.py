"""Boundary extraction and signed normalized boundary error.

For 2D quad meshes, boundary edges (incidence 1) are traced into closed
loops; each original boundary vertex gets an error equal to its distance
to the nearest reference boundary segment divided by the reference
bounding-box diagonal, positive outside the reference domain (even-odd
over all reference loops jointly, so hole interiors count as outside)
and negative inside.

For 3D hex meshes, the boundary is the incidence-1 quad surface; errors
use closest-point queries against a reference triangle surface through
an AABB tree and are signed by the angle-weighted pseudo-normal at the
closest feature. Open reference surfaces degrade to unsigned magnitudes
with an explicit flag.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mesh_io import Adjacency, Mesh, ReferenceSurface
from .spatial import AABBTree

ON_BOUNDARY_REL = 1e-12


class NonManifoldBoundaryError(ValueError):
    """A boundary vertex with a number of boundary edges other than 2."""


@dataclass(frozen=True)
class BoundaryCurve:
    """Closed loop of boundary vertices with cumulative arc length.

    The outermost loop (largest absolute signed area) runs
    counter-clockwise, holes clockwise; each loop starts at its lowest
    vertex id.
    """

    vertices: np.ndarray  # ordered vertex ids
    arclength: np.ndarray  # cumulative, arclength[0] == 0
    signed_area: float


@dataclass(frozen=True)
class BoundaryErrorRecord:
    vertex: int
    closest_point: tuple
    error: float  # signed, normalized by the reference diagonal


@dataclass(frozen=True)
class CollatedSeries:
    values: np.ndarray  # ascending
    percentiles: np.ndarray  # rank / (N - 1); 0 for a single record
    vertices: np.ndarray  # vertex id per value


@dataclass(frozen=True)
class BoundarySurface:
    """Incidence-1 quad faces of a hex mesh."""

    quads: np.ndarray  # (k, 4) original vertex ids, corner loops
    vertex_ids: np.ndarray  # unique boundary vertex ids, ascending


@dataclass(frozen=True)
class SurfaceErrorField:
    surface: BoundarySurface
    records: tuple  # BoundaryErrorRecord per boundary vertex
    signed: bool  # False when the reference is not closed-manifold
    uv: np.ndarray | None  # (k, 2) per boundary vertex, from the reference


# ---------------------------------------------------------------------------
# extraction


def extract_boundary_2d(mesh: Mesh, adjacency: Adjacency) -> list[BoundaryCurve]:
    """Trace incidence-1 edges into closed, consistently oriented loops."""
    if mesh.dimension != 2:
        raise ValueError("extract_boundary_2d requires a quad mesh")
    boundary_edges = [
        tuple(adjacency.edges[i])
        for i, cs in enumerate(adjacency.edge_cells)
        if len(cs) == 1
    ]
    neighbors: dict = {}
    for u, v in boundary_edges:
        neighbors.setdefault(int(u), []).append(int(v))
        neighbors.setdefault(int(v), []).append(int(u))
    for v, ns in neighbors.items():
        if len(ns) != 2:
            raise NonManifoldBoundaryError(
                f"boundary vertex {v} has {len(ns)} boundary edges"
            )

    loops = []
    visited: set = set()
    for start in sorted(neighbors):
        if start in visited:
            continue
        loop = [start]
        visited.add(start)
        prev = start
        current = min(neighbors[start])
        while current != start:
            loop.append(current)
            visited.add(current)
            a, b = neighbors[current]
            prev, current = current, (b if a == prev else a)
        loops.append(loop)

    areas = [_signed_area(mesh.vertices[loop, :2]) for loop in loops]
    outer = int(np.argmax(np.abs(areas))) if loops else -1
    out = []
    for i, loop in enumerate(loops):
        area = areas[i]
        want_ccw = i == outer
        if (area > 0) != want_ccw and area != 0:
            loop = [loop[0]] + loop[:0:-1]
            area = -area
        pts = mesh.vertices[loop]
        closed = np.vstack([pts, pts[:1]])
        seglen = np.linalg.norm(np.diff(closed, axis=0), axis=1)
        arc = np.concatenate([[0.0], np.cumsum(seglen[:-1])])
        out.append(
            BoundaryCurve(
                vertices=np.array(loop, dtype=np.int64),
                arclength=arc,
                signed_area=float(area),
            )
        )
    return out


def _signed_area(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def extract_boundary_3d(mesh: Mesh, adjacency: Adjacency) -> BoundarySurface:
    """The quad surface formed by faces incident to exactly one cell."""
    if mesh.dimension != 3:
        raise ValueError("extract_boundary_3d requires a hex mesh")
    idx = adjacency.boundary_face_indices()
    quads = adjacency.faces[idx] if len(idx) else np.zeros((0, 4), dtype=np.int64)
    return BoundarySurface(quads=quads, vertex_ids=np.unique(quads))


# ---------------------------------------------------------------------------
# 2D signed error


def _loop_segments(mesh: Mesh, loops: list[BoundaryCurve]) -> np.ndarray:
    segs = []
    for loop in loops:
        pts = mesh.vertices[loop.vertices][:, :2]
        nxt = np.roll(pts, -1, axis=0)
        segs.append(np.stack([pts, nxt], axis=1))
    if not segs:
        return np.zeros((0, 2, 2))
    return np.concatenate(segs, axis=0)


def _closest_on_segments(p: np.ndarray, segs: np.ndarray) -> tuple[float, np.ndarray]:
    a = segs[:, 0]
    b = segs[:, 1]
    ab = b - a
    ab2 = np.einsum("ij,ij->i", ab, ab)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.einsum("ij,ij->i", p - a, ab) / ab2
    t = np.clip(np.nan_to_num(t), 0.0, 1.0)
    closest = a + t[:, None] * ab
    d2 = np.einsum("ij,ij->i", closest - p, closest - p)
    k = int(np.argmin(d2))
    return float(np.sqrt(d2[k])), closest[k]


def point_in_loops(p: np.ndarray, segs: np.ndarray) -> bool:
    """Even-odd crossing test against all loop segments jointly."""
    x, y = float(p[0]), float(p[1])
    a, b = segs[:, 0], segs[:, 1]
    cond = (a[:, 1] > y) != (b[:, 1] > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = a[:, 0] + (y - a[:, 1]) * (b[:, 0] - a[:, 0]) / (b[:, 1] - a[:, 1])
    crossings = np.count_nonzero(cond & (x < xs))
    return crossings % 2 == 1


def signed_boundary_error_2d(
    original_mesh: Mesh,
    original_loops: list[BoundaryCurve],
    reference_mesh: Mesh,
    reference_loops: list[BoundaryCurve],
    diag_reference: float | None = None,
) -> list[BoundaryErrorRecord]:
    """One record per original boundary vertex, in loop traversal order."""
    segs = _loop_segments(reference_mesh, reference_loops)
    if len(segs) == 0:
        raise ValueError("empty reference boundary")
    if diag_reference is None:
        lo = reference_mesh.vertices.min(axis=0)
        hi = reference_mesh.vertices.max(axis=0)
        diag_reference = float(np.linalg.norm(hi - lo))
    records = []
    for loop in original_loops:
        for v in loop.vertices:
            p = original_mesh.vertices[v][:2]
            dist, closest = _closest_on_segments(p, segs)
            if dist <= ON_BOUNDARY_REL * diag_reference:
                err = 0.0
            else:
                sign = -1.0 if point_in_loops(p, segs) else 1.0
                err = sign * dist / diag_reference
            records.append(
                BoundaryErrorRecord(
                    vertex=int(v),
                    closest_point=(float(closest[0]), float(closest[1]), 0.0),
                    error=err,
                )
            )
    return records


# ---------------------------------------------------------------------------
# 3D signed error


def closest_point_on_triangle(p: np.ndarray, a, b, c) -> tuple[np.ndarray, np.ndarray]:
    """Closest point and its barycentric coordinates (w_a, w_b, w_c)."""
    ab = b - a
    ac = c - a
    ap = p - a
    d1 = np.dot(ab, ap)
    d2 = np.dot(ac, ap)
    if d1 <= 0 and d2 <= 0:
        return a, np.array([1.0, 0.0, 0.0])
    bp = p - b
    d3 = np.dot(ab, bp)
    d4 = np.dot(ac, bp)
    if d3 >= 0 and d4 <= d3:
        return b, np.array([0.0, 1.0, 0.0])
    vc = d1 * d4 - d3 * d2
    if vc <= 0 and d1 >= 0 and d3 <= 0:
        t = d1 / (d1 - d3) if d1 != d3 else 0.0
        return a + t * ab, np.array([1.0 - t, t, 0.0])
    cp = p - c
    d5 = np.dot(ab, cp)
    d6 = np.dot(ac, cp)
    if d6 >= 0 and d5 <= d6:
        return c, np.array([0.0, 0.0, 1.0])
    vb = d5 * d2 - d1 * d6
    if vb <= 0 and d2 >= 0 and d6 <= 0:
        t = d2 / (d2 - d6) if d2 != d6 else 0.0
        return a + t * ac, np.array([1.0 - t, 0.0, t])
    va = d3 * d6 - d5 * d4
    if va <= 0 and (d4 - d3) >= 0 and (d5 - d6) >= 0:
        denom = (d4 - d3) + (d5 - d6)
        t = (d4 - d3) / denom if denom != 0 else 0.0
        return b + t * (c - b), np.array([0.0, 1.0 - t, t])
    denom = va + vb + vc
    v = vb / denom
    w = vc / denom
    return a + v * ab + w * ac, np.array([1.0 - v - w, v, w])


class _SignedDistanceQuery:
    """Closest point, pseudo-normal sign, and UV against a triangle surface."""

    BARY_EPS = 1e-9

    def __init__(self, reference: ReferenceSurface):
        self.ref = reference
        verts = reference.vertices
        tris = reference.triangles
        self.tri_pts = verts[tris]
        lo = self.tri_pts.min(axis=1)
        hi = self.tri_pts.max(axis=1)
        self.tree = AABBTree(lo, hi)

        # Angle-weighted pseudo-normals: per face, per edge, per vertex.
        self.face_normals = np.zeros((len(tris), 3))
        self.vertex_normals = np.zeros((len(verts), 3))
        self.edge_normals: dict = {}
        for ti, (ia, ib, ic) in enumerate(tris):
            a, b, c = verts[ia], verts[ib], verts[ic]
            n = np.cross(b - a, c - a)
            norm = np.linalg.norm(n)
            if norm == 0:
                continue
            n = n / norm
            self.face_normals[ti] = n
            for vi, e1, e2 in ((ia, b, c), (ib, c, a), (ic, a, b)):
                u = e1 - verts[vi]
                w = e2 - verts[vi]
                cosang = np.dot(u, w) / (np.linalg.norm(u) * np.linalg.norm(w))
                angle = np.arccos(np.clip(cosang, -1.0, 1.0))
                self.vertex_normals[vi] += angle * n
            for u, v in ((ia, ib), (ib, ic), (ic, ia)):
                key = (min(int(u), int(v)), max(int(u), int(v)))
                self.edge_normals[key] = self.edge_normals.get(key, 0.0) + n

        self._last = None  # (closest point, bary) of the last primitive test

    def _tri_dist2(self, ti: int, p: np.ndarray) -> float:
        a, b, c = self.tri_pts[ti]
        cp, bary = closest_point_on_triangle(p, a, b, c)
        d = cp - p
        return float(d @ d)

    def query(self, p: np.ndarray) -> tuple[float, np.ndarray, float, np.ndarray | None]:
        """(distance, closest point, sign, uv) for one query point."""
        ti, _ = self.tree.nearest(p, self._tri_dist2)
        a, b, c = self.tri_pts[ti]
        cp, bary = closest_point_on_triangle(p, a, b, c)
        dist = float(np.linalg.norm(cp - p))

        tri = self.ref.triangles[ti]
        zero = bary < self.BARY_EPS
        nz = int(zero.sum())
        if nz == 0:
            normal = self.face_normals[ti]
        elif nz == 1:
            # Closest point on the edge opposite the zero-weight vertex.
            keep = [int(tri[k]) for k in range(3) if not zero[k]]
            key = (min(keep), max(keep))
            normal = self.edge_normals.get(key, self.face_normals[ti])
        else:
            vi = int(tri[int(np.argmax(bary))])
            normal = self.vertex_normals[vi]
        sign = 1.0 if np.dot(p - cp, normal) >= 0 else -1.0

        uv = None
        if self.ref.uv is not None:
            uv = bary @ self.ref.uv[tri]
        return dist, cp, sign, uv


def signed_boundary_error_3d(
    mesh: Mesh,
    surface: BoundarySurface,
    reference: ReferenceSurface,
    diag_reference: float | None = None,
) -> SurfaceErrorField:
    """Error field over the hex boundary vertices against a triangle reference."""
    if len(reference.triangles) == 0:
        raise ValueError("empty reference surface")
    if diag_reference is None:
        diag_reference = reference.diagonal
    signed = reference.closed
    query = _SignedDistanceQuery(reference)
    records = []
    uvs = [] if reference.uv is not None else None
    for v in surface.vertex_ids:
        p = mesh.vertices[v]
        dist, cp, sign, uv = query.query(p)
        if dist <= ON_BOUNDARY_REL * diag_reference:
            err = 0.0
        else:
            err = (sign if signed else 1.0) * dist / diag_reference
        records.append(
            BoundaryErrorRecord(
                vertex=int(v),
                closest_point=tuple(float(x) for x in cp),
                error=err,
            )
        )
        if uvs is not None:
            uvs.append(uv)
    return SurfaceErrorField(
        surface=surface,
        records=tuple(records),
        signed=signed,
        uv=np.array(uvs) if uvs is not None else None,
    )


# ---------------------------------------------------------------------------
# series


def per_loop_series(
    loops: list[BoundaryCurve], records: list[BoundaryErrorRecord]
) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Per loop: (vertex ids, arc lengths, signed errors) in traversal order."""
    by_vertex = {r.vertex: r.error for r in records}
    series = []
    for loop in loops:
        missing = [int(v) for v in loop.vertices if int(v) not in by_vertex]
        if missing:
            raise ValueError(f"records missing for loop vertices {missing[:5]}")
        errs = np.array([by_vertex[int(v)] for v in loop.vertices])
        series.append((loop.vertices, loop.arclength, errs))
    return series


def collate(records: list[BoundaryErrorRecord]) -> CollatedSeries:
    """All errors sorted ascending (ties by vertex id) vs percentile rank."""
    if not records:
        raise ValueError("no records to collate")
    vals = np.array([r.error for r in records])
    ids = np.array([r.vertex for r in records])
    order = np.lexsort((ids, vals))
    n = len(vals)
    if n == 1:
        perc = np.array([0.0])
    else:
        perc = np.arange(n) / (n - 1)
    return CollatedSeries(values=vals[order], percentiles=perc, vertices=ids[order])
