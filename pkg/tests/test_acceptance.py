"""End-to-end acceptance checks, one test per guarantee.

Each test prints a single PASS line with the measured quantity so the
suite output doubles as a report.
"""

import time

import numpy as np
import pytest

from hqview.boundary import extract_boundary_2d, signed_boundary_error_2d, signed_boundary_error_3d
from hqview.cli import main
from hqview.feature_edges import default_e_qmax, filter_feature_edges
from hqview.glyphs import GlyphParams, build_glyphs, cluster_glyphs, default_params
from hqview.mesh_io import HEX_EDGES, Mesh, build_adjacency, write_mesh
from hqview.overlap import analyze_overlaps, place_arrows, point_in_hex
from hqview.quality import HEX_CORNER_NEIGHBORS, compute_quality_field
from hqview.scene import dumps_scene, loads_scene, read_scene
from hqview.spatial import UnionFind
from hqview.synth import (
    degrade_vertices,
    hex_grid,
    merge_meshes,
    quad_grid,
    random_convex_hex,
    unit_cube_surface,
)
from conftest import SHEAR, UNIT_CUBE, single_hex


def _corner_dets(corners):
    """All corner determinants, every cyclic ordering of the edge frame."""
    dets = []
    for v, (a, b, c) in enumerate(HEX_CORNER_NEIGHBORS):
        edges = [corners[n] - corners[v] for n in (a, b, c)]
        edges = [e / np.linalg.norm(e) for e in edges]
        for shift in range(3):
            m = np.stack([edges[(shift + k) % 3] for k in range(3)])
            dets.append(float(np.linalg.det(m)))
    return dets


def test_metric_correctness():
    t0 = time.perf_counter()

    dets = _corner_dets(UNIT_CUBE)
    assert len(dets) == 24
    assert all(abs(d - 1.0) <= 1e-12 for d in dets)
    mesh = single_hex(UNIT_CUBE)
    field = compute_quality_field(mesh, build_adjacency(mesh))
    np.testing.assert_allclose(field.vertex_quality, 1.0, atol=1e-12)

    mirrored = single_hex(UNIT_CUBE * np.array([-1.0, 1.0, 1.0]))
    field = compute_quality_field(mirrored, build_adjacency(mirrored))
    np.testing.assert_allclose(field.vertex_quality, -1.0, atol=1e-12)

    sheared = single_hex(UNIT_CUBE @ SHEAR.T)
    field = compute_quality_field(sheared, build_adjacency(sheared))
    assert abs(field.vertex_quality[0] - 1 / np.sqrt(2)) <= 1e-12

    dt = time.perf_counter() - t0
    assert dt < 1.0
    print(f"PASS metric correctness: 24 unit-cube dets = 1, mirrored = -1, "
          f"sheared = 1/sqrt(2), {dt:.3f} s")


class _Field:
    def __init__(self, q):
        self.vertex_quality = np.asarray(q, dtype=np.float64)
        self.n_vertices = len(q)


def test_glyph_formula():
    class M:
        vertices = np.arange(15, dtype=float).reshape(5, 3) * 10

    glyphs = build_glyphs(_Field([-1.0, -0.5, 0.0, 0.5, 1.0]), M, GlyphParams(0.5, 0.0))
    radii = {g.vertex: g.radius for g in glyphs}
    assert [radii.get(v, 0.0) for v in range(5)] == [1.0, 0.75, 0.5, 0.25, 0.0]

    rng = np.random.default_rng(0)
    for _ in range(10):
        base = hex_grid(int(rng.integers(2, 5)), int(rng.integers(2, 5)), int(rng.integers(2, 5)))
        verts = base.vertices * rng.uniform(0.2, 5.0) + rng.uniform(-0.2, 0.2, base.vertices.shape)
        mesh = Mesh(dimension=3, vertices=verts, cells=base.cells)
        # Independent average edge length from the raw cell edge table.
        edges = set()
        for cell in mesh.cells:
            for a, b in HEX_EDGES:
                u, v = int(cell[a]), int(cell[b])
                edges.add((min(u, v), max(u, v)))
        lengths = [np.linalg.norm(mesh.vertices[u] - mesh.vertices[v]) for u, v in edges]
        avg = float(np.mean(lengths))
        params = default_params(build_adjacency(mesh))
        assert abs(params.r_max - 0.5 * avg) <= 1e-12
        assert abs(params.r_dmin - 0.1 * params.r_max) <= 1e-12

    print("PASS glyph formula: radii {1.0, 0.75, 0.5, 0.25, 0} exact, "
          "defaults r_max = 0.5 avg-edge and r_dmin = 0.1 r_max on 10 random meshes")


def _brute_partition(centers, radii):
    n = len(centers)
    d = np.linalg.norm(centers[:, None] - centers[None, :], axis=2)
    overlap = radii[:, None] + radii[None, :] > d
    uf = UnionFind(n)
    ii, jj = np.nonzero(np.triu(overlap, k=1))
    for i, j in zip(ii, jj):
        uf.union(int(i), int(j))
    return {frozenset(g) for g in uf.groups()}


def test_clustering_oracle():
    from hqview.glyphs import Glyph

    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    for trial in range(100):
        n = int(rng.integers(1, 501))
        centers = rng.uniform(0, 20, size=(n, 3))
        radii = rng.uniform(0.01, 2.0, size=n)

        def glyphs(scale):
            return [
                Glyph(vertex=i, center=tuple(centers[i]), c=radii[i] * scale,
                      radius=radii[i] * scale)
                for i in range(n)
            ]

        clusters = cluster_glyphs(glyphs(1.0))
        assert {frozenset(c.members) for c in clusters} == _brute_partition(centers, radii)

        grown = cluster_glyphs(glyphs(1.4))
        owner = {m: c.cluster_id for c in grown for m in c.members}
        for c in clusters:
            assert len({owner[m] for m in c.members}) == 1
    dt = time.perf_counter() - t0
    assert dt < 30.0
    print(f"PASS clustering oracle: 100 trials (n <= 500) match brute force, "
          f"monotone under radius growth, {dt:.1f} s")


def test_aggregation_performance():
    rng = np.random.default_rng(1)
    mesh = degrade_vertices(hex_grid(50, 25, 20), 0.05, rng)
    assert mesh.n_cells == 25000
    t0 = time.perf_counter()
    adjacency = build_adjacency(mesh)
    field = compute_quality_field(mesh, adjacency)
    params = default_params(adjacency)
    glyphs = build_glyphs(field, mesh, params)
    clusters = cluster_glyphs(glyphs)
    dt = time.perf_counter() - t0
    assert dt <= 180.0
    assert len(clusters) >= 1
    print(f"PASS performance: 25000-cell grid, {len(glyphs)} glyphs, "
          f"{len(clusters)} clusters in {dt:.2f} s (limit 180 s)")


def test_feature_edge_monotonicity():
    rng = np.random.default_rng(3)
    base = hex_grid(4, 4, 4)
    verts = base.vertices + rng.uniform(-0.35, 0.35, base.vertices.shape)
    mesh = Mesh(dimension=3, vertices=verts, cells=base.cells)
    adjacency = build_adjacency(mesh)
    field = compute_quality_field(mesh, adjacency)

    assert default_e_qmax(field) == min(0.2 + field.q_m, 1.0)

    previous = set()
    for t in np.linspace(-1.0, 1.0, 20):
        emphasized = set(filter_feature_edges(mesh, adjacency, field, float(t)).emphasized)
        assert previous.issubset(emphasized)
        previous = emphasized
    print("PASS feature edges: emphasized sets nested over 20 thresholds, "
          "default threshold = min(0.2 + q_m, 1) exact")


def test_overlap_fixture_and_arrows():
    verts = np.vstack([UNIT_CUBE, UNIT_CUBE + 0.5])
    verts[8] = verts[0]  # coincident pair (0, 8)
    mesh = Mesh(dimension=3, vertices=verts, cells=np.array([np.arange(8), np.arange(8, 16)]))
    adjacency = build_adjacency(mesh)
    report = analyze_overlaps(mesh, adjacency)
    assert list(report.vertex_pairs) == [(0, 8, 0.0)]
    brute = [
        (v, c)
        for v in range(mesh.n_vertices)
        for c in range(mesh.n_cells)
        if c not in adjacency.vertex_cells[v] and point_in_hex(mesh.vertices[v], mesh, c)
    ]
    assert list(report.containments) == brute
    assert (6, 1) in report.containments  # corner 6 sits at cell B's center

    for n in range(1, 9):
        angles = [a.angle_deg for a in place_arrows([0] * n)]
        assert angles == [k * 360.0 / n for k in range(n)]
    print("PASS overlap: fixture incidents match brute force exactly, "
          "arrow angles k*360/n exact for n = 1..8")


def test_point_in_hex_oracle():
    from scipy.spatial import ConvexHull, Delaunay

    rng = np.random.default_rng(11)
    agree = total = 0
    while total < 10000:
        corners = random_convex_hex(rng)
        mesh = Mesh(dimension=3, vertices=corners, cells=np.arange(8).reshape(1, 8))
        hull = ConvexHull(corners)
        tri = Delaunay(corners)
        lo, hi = corners.min(axis=0), corners.max(axis=0)
        for p in rng.uniform(lo - 0.2, hi + 0.2, size=(60, 3)):
            plane_dist = float(np.max(hull.equations[:, :3] @ p + hull.equations[:, 3]))
            if abs(plane_dist) < 1e-6:
                continue
            total += 1
            if point_in_hex(p, mesh, 0) == (tri.find_simplex(p) >= 0):
                agree += 1
    rate = agree / total
    assert rate >= 0.999
    print(f"PASS point-in-hex: {rate:.5f} agreement with convex-hull oracle "
          f"over {total} pairs")


def _unit_square(vertices=None):
    verts = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], float) \
        if vertices is None else np.asarray(vertices, float)
    return Mesh(dimension=2, vertices=verts, cells=np.arange(4).reshape(1, 4))


def _errors_2d(original, reference):
    ref_adj = build_adjacency(reference)
    loops = extract_boundary_2d(original, build_adjacency(original))
    ref_loops = extract_boundary_2d(reference, ref_adj)
    return signed_boundary_error_2d(original, loops, reference, ref_loops,
                                    float(ref_adj.diagonal))


def test_boundary_error_cases():
    # Identity is all-zero.
    mesh = quad_grid(3, 3, holes=((1, 1),))
    assert all(abs(r.error) <= 1e-12 for r in _errors_2d(mesh, mesh))

    # Unit-square vertex displaced by 0.1 outward / inward.
    reference = _unit_square()
    for dx, expected in ((0.1, 0.1), (-0.1, -0.1)):
        moved = _unit_square([[0, 0, 0], [1, 0, 0], [1 + dx, 0.5, 0], [0, 1, 0]])
        rec = {r.vertex: r.error for r in _errors_2d(moved, reference)}
        assert abs(rec[2] - expected / np.sqrt(2)) <= 1e-12

    # Cube probes at +/-{0.2, 0.5}/sqrt(3).
    ref3d = unit_cube_surface()

    class Surface:
        vertex_ids = np.arange(2)

    class M:
        vertices = np.array([[0.5, 0.5, 1.2], [0.5, 0.5, 0.5]])

    field = signed_boundary_error_3d(M, Surface, ref3d)
    assert abs(field.records[0].error - 0.2 / np.sqrt(3)) <= 1e-9
    assert abs(field.records[1].error + 0.5 / np.sqrt(3)) <= 1e-9

    # Sign flips wholesale when the reference shrinks or grows.
    original = quad_grid(2, 2)
    for scale, sign in ((0.9, 1.0), (1.1, -1.0)):
        base = quad_grid(2, 2)
        center = base.vertices.mean(axis=0)
        scaled = Mesh(dimension=2, vertices=(base.vertices - center) * scale + center,
                      cells=base.cells)
        assert all(np.sign(r.error) == sign for r in _errors_2d(original, scaled))

    # Joint scaling leaves normalized errors unchanged.
    rng = np.random.default_rng(5)
    base = quad_grid(3, 2)
    verts = base.vertices + np.pad(rng.uniform(-0.1, 0.1, (base.n_vertices, 2)),
                                   ((0, 0), (0, 1)))
    original = Mesh(dimension=2, vertices=verts, cells=base.cells)
    reference = quad_grid(3, 2)
    rec1 = _errors_2d(original, reference)
    s = 42.0
    rec2 = _errors_2d(
        Mesh(dimension=2, vertices=verts * s, cells=base.cells),
        Mesh(dimension=2, vertices=reference.vertices * s, cells=reference.cells),
    )
    for a, b in zip(rec1, rec2):
        assert abs(a.error - b.error) <= 1e-9

    # Holed grid plus a detached quad yields loop sizes {12, 4, 4}.
    combined = merge_meshes(quad_grid(3, 3, holes=((1, 1),)),
                            quad_grid(1, 1, spacing=0.5))
    shifted = combined.vertices.copy()
    shifted[-4:] += np.array([6.0, 0.0, 0.0])
    combined = Mesh(dimension=2, vertices=shifted, cells=combined.cells)
    loops = extract_boundary_2d(combined, build_adjacency(combined))
    assert sorted(len(l.vertices) for l in loops) == [4, 4, 12]

    print("PASS boundary error: identity zero, +/-0.1/sqrt(2), +/-{0.2, 0.5}/sqrt(3), "
          "sign flip under 0.9/1.1 scaling, joint-scaling invariant, loops {12, 4, 4}")


def test_cli_scene_determinism(tmp_path):
    path = tmp_path / "cube.vtk"
    write_mesh(single_hex(UNIT_CUBE, name="cube"), str(path))

    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["analyze", "-m", str(path), "-o", str(a)]) == 0
    assert main(["analyze", "-m", str(path), "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert dumps_scene(loads_scene(text)) == text

    out = tmp_path / "cmp.json"
    code = main(
        [
            "compare", "--mesh-a", str(path), "--mesh-b", str(path), "-o", str(out),
            "--rmax", "1", "--rdmin", "0.5", "--eqmax", "0.85",
        ]
    )
    assert code == 0
    doc = read_scene(str(out))
    pa = doc["scenes"][0]["provenance"]["parameters"]
    pb = doc["scenes"][1]["provenance"]["parameters"]
    assert pa == pb
    assert (pa["r_max"], pa["r_dmin"], pa["e_qmax"]) == (1.0, 0.5, 0.85)
    print("PASS CLI/scene: byte-identical round trip and reruns, compare shares "
          "parameters and records r_max = 1, r_dmin = 0.5, e_qmax = 0.85 verbatim")
