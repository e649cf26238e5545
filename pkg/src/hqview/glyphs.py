"""Sphere glyphs for vertex quality and their cluster aggregation.

Each vertex gets a sphere of radius (1 - J_m) * r_max, so perfect
vertices vanish and inverted ones reach 2 * r_max. Glyphs smaller than
r_dmin are hidden. Displayed glyphs whose spheres overlap (sum of radii
strictly exceeds center distance) are merged transitively into clusters,
each summarized by one aggregated glyph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mesh_io import Adjacency, Mesh
from .quality import QualityField
from .spatial import SpatialHash, UnionFind

PALETTE_SIZE = 12

# Categorical 12-color palette (hex RGB) used for cluster edges.
CLUSTER_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
)


class EmptyMeshError(ValueError):
    """Raised when a mesh has no edges to derive default parameters from."""


@dataclass(frozen=True)
class GlyphParams:
    r_max: float
    r_dmin: float

    def __post_init__(self):
        if self.r_max <= 0:
            raise ValueError("r_max must be positive")
        if self.r_dmin < 0:
            raise ValueError("r_dmin must be non-negative")
        if self.r_dmin > 2.0 * self.r_max:
            raise ValueError("r_dmin exceeds the largest possible radius 2*r_max")


@dataclass(frozen=True)
class Glyph:
    vertex: int
    center: tuple
    c: float  # 1 - J_m, in [0, 2]
    radius: float


@dataclass(frozen=True)
class ClusterSummary:
    cluster_id: int
    members: tuple  # vertex ids, ascending
    representative: int
    aggregated_radius: float
    worst_quality: float
    member_count: int
    color_index: int


def default_params(adjacency: Adjacency) -> GlyphParams:
    """r_max = half the average edge length, r_dmin = 10% of r_max."""
    if adjacency.average_edge_length <= 0 or len(adjacency.edges) == 0:
        raise EmptyMeshError("empty mesh: no edges to size glyphs from")
    r_max = 0.5 * adjacency.average_edge_length
    return GlyphParams(r_max=r_max, r_dmin=0.1 * r_max)


def glyph_radii(field: QualityField, params: GlyphParams) -> np.ndarray:
    """Radius for every vertex, hidden or not."""
    return (1.0 - field.vertex_quality) * params.r_max


def build_glyphs(field: QualityField, mesh: Mesh, params: GlyphParams) -> list[Glyph]:
    """Displayed glyphs only: radius >= r_dmin. Order is by vertex id."""
    radii = glyph_radii(field, params)
    shown = np.nonzero(radii >= params.r_dmin)[0]
    return [
        Glyph(
            vertex=int(v),
            center=tuple(float(x) for x in mesh.vertices[v]),
            c=float(1.0 - field.vertex_quality[v]),
            radius=float(radii[v]),
        )
        for v in shown
    ]


def cluster_glyphs(glyphs: list[Glyph]) -> list[ClusterSummary]:
    """Connected components of the pairwise sphere-overlap graph.

    Representative = member nearest the member centroid (ties by lowest
    vertex id); aggregated radius = max member radius; cluster ids and
    color indices are assigned by ascending worst quality (worst cluster
    first), ties by lowest member vertex id.
    """
    if not glyphs:
        return []
    centers = np.array([g.center for g in glyphs], dtype=np.float64)
    radii = np.array([g.radius for g in glyphs], dtype=np.float64)

    uf = UnionFind(len(glyphs))
    # Cell size 2*max radius bounds every overlapping pair's center
    # distance, so adjacent-bin scans see all overlap candidates.
    cell = 2.0 * float(radii.max())
    if cell > 0:
        grid = SpatialHash(centers, cell)
        for i, j, _ in grid.close_pairs(radii):
            uf.union(i, j)

    raw = []
    for group in uf.groups():
        member_vertices = [glyphs[i].vertex for i in group]
        pts = centers[group]
        centroid = pts.mean(axis=0)
        d2 = np.einsum("ij,ij->i", pts - centroid, pts - centroid)
        # argmin is stable and groups are sorted by glyph index, which is
        # ascending vertex id, so ties resolve to the lowest id.
        rep = member_vertices[int(np.argmin(d2))]
        worst = float(min(1.0 - glyphs[i].c for i in group))
        raw.append(
            {
                "members": tuple(sorted(member_vertices)),
                "representative": rep,
                "aggregated_radius": float(radii[group].max()),
                "worst_quality": worst,
            }
        )

    raw.sort(key=lambda r: (r["worst_quality"], r["members"][0]))
    return [
        ClusterSummary(
            cluster_id=rank,
            members=r["members"],
            representative=r["representative"],
            aggregated_radius=r["aggregated_radius"],
            worst_quality=r["worst_quality"],
            member_count=len(r["members"]),
            color_index=rank % PALETTE_SIZE,
        )
        for rank, r in enumerate(raw)
    ]


@dataclass(frozen=True)
class MeshFragment:
    """Cells incident to a vertex set, with original ids preserved."""

    vertex_ids: tuple  # original vertex ids, ascending
    cell_ids: tuple  # original cell ids, ascending
    vertices: np.ndarray  # positions of vertex_ids
    cells: np.ndarray  # connectivity reindexed into vertex_ids


def _fragment(mesh: Mesh, adjacency: Adjacency, seed_vertices) -> MeshFragment:
    cell_ids = sorted({c for v in seed_vertices for c in adjacency.vertex_cells[v]})
    if cell_ids:
        cells = mesh.cells[np.array(cell_ids, dtype=np.int64)]
        vertex_ids = np.unique(cells)
        remap = {int(v): i for i, v in enumerate(vertex_ids)}
        local = np.array([[remap[int(v)] for v in row] for row in cells], dtype=np.int64)
        positions = mesh.vertices[vertex_ids]
    else:
        vertex_ids = np.array([], dtype=np.int64)
        local = np.zeros((0, mesh.arity), dtype=np.int64)
        positions = np.zeros((0, 3))
    return MeshFragment(
        vertex_ids=tuple(int(v) for v in vertex_ids),
        cell_ids=tuple(cell_ids),
        vertices=positions,
        cells=local,
    )


def sub_region(mesh: Mesh, adjacency: Adjacency, cluster: ClusterSummary) -> MeshFragment:
    """Union of the cells incident to any cluster member."""
    return _fragment(mesh, adjacency, cluster.members)


def one_ring(
    mesh: Mesh, adjacency: Adjacency, field: QualityField, vertex: int
) -> tuple[MeshFragment, list[tuple[int, float]]]:
    """Incident cells of one vertex plus its corner Jacobians by cell id."""
    if not 0 <= vertex < mesh.n_vertices:
        raise IndexError(f"vertex {vertex} out of range")
    return _fragment(mesh, adjacency, [vertex]), field.corner_jacobians(vertex)
