import numpy as np
import pytest

from hqview.boundary import (
    NonManifoldBoundaryError,
    collate,
    extract_boundary_2d,
    extract_boundary_3d,
    per_loop_series,
    signed_boundary_error_2d,
    signed_boundary_error_3d,
)
from hqview.mesh_io import Mesh, ReferenceSurface, build_adjacency
from hqview.synth import hex_grid, merge_meshes, quad_grid, unit_cube_surface
from conftest import unit_quad

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)


def _loops(mesh):
    return extract_boundary_2d(mesh, build_adjacency(mesh))


def test_single_quad_one_loop():
    loops = _loops(unit_quad())
    assert len(loops) == 1
    assert len(loops[0].vertices) == 4
    assert loops[0].vertices[0] == 0
    assert loops[0].signed_area > 0  # outer loop is counter-clockwise


def test_holed_grid_two_loops():
    mesh = quad_grid(3, 3, holes=((1, 1),))
    loops = _loops(mesh)
    sizes = sorted(len(l.vertices) for l in loops)
    assert sizes == [4, 12]
    outer = max(loops, key=lambda l: abs(l.signed_area))
    hole = min(loops, key=lambda l: abs(l.signed_area))
    assert outer.signed_area > 0
    assert hole.signed_area < 0  # holes run clockwise


def test_three_loop_fixture():
    mesh = merge_meshes(
        quad_grid(3, 3, holes=((1, 1),)),
        quad_grid(1, 1, spacing=0.5, name="island"),
    )
    # Shift the island outside the grid so nothing touches.
    verts = mesh.vertices.copy()
    verts[-4:] += np.array([10.0, 0.0, 0.0])
    mesh = Mesh(dimension=2, vertices=verts, cells=mesh.cells)
    loops = _loops(mesh)
    assert sorted(len(l.vertices) for l in loops) == [4, 4, 12]


def test_arclength_cumulative():
    loops = _loops(quad_grid(2, 1))
    arc = loops[0].arclength
    assert arc[0] == 0.0
    assert np.all(np.diff(arc) > 0)
    assert arc[-1] == pytest.approx(5.0)  # perimeter 6 minus the last leg


def test_nonmanifold_boundary_rejected():
    # Two quads meeting only at vertex 2: four boundary edges touch it.
    verts = np.array(
        [
            [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
            [2, 1, 0], [2, 2, 0], [1, 2, 0],
        ],
        dtype=float,
    )
    cells = np.array([[0, 1, 2, 3], [2, 4, 5, 6]])
    mesh = Mesh(dimension=2, vertices=verts, cells=cells)
    with pytest.raises(NonManifoldBoundaryError):
        extract_boundary_2d(mesh, build_adjacency(mesh))


def test_loop_partition_covers_all_boundary_edges():
    mesh = quad_grid(5, 5, holes=((1, 1), (3, 3)))
    adj = build_adjacency(mesh)
    loops = extract_boundary_2d(mesh, adj)
    n_boundary = sum(1 for cs in adj.edge_cells if len(cs) == 1)
    assert sum(len(l.vertices) for l in loops) == n_boundary
    all_ids = [int(v) for l in loops for v in l.vertices]
    assert len(all_ids) == len(set(all_ids))


# ---------------------------------------------------------------------------
# 2D error


def _error_records(original, reference):
    orig_adj = build_adjacency(original)
    ref_adj = build_adjacency(reference)
    loops = extract_boundary_2d(original, orig_adj)
    ref_loops = extract_boundary_2d(reference, ref_adj)
    return loops, signed_boundary_error_2d(
        original, loops, reference, ref_loops, float(ref_adj.diagonal)
    )


def test_identity_zero_error():
    mesh = quad_grid(3, 3, holes=((1, 1),))
    _, records = _error_records(mesh, mesh)
    assert all(abs(r.error) <= 1e-12 for r in records)


def test_outside_vertex_positive():
    reference = unit_quad()
    original = Mesh(
        dimension=2,
        vertices=np.array([[0, 0, 0], [1, 0, 0], [1.1, 0.5, 0], [0, 1, 0]], float),
        cells=np.arange(4).reshape(1, 4),
    )
    _, records = _error_records(original, reference)
    by_vertex = {r.vertex: r for r in records}
    assert by_vertex[2].error == pytest.approx(0.1 / SQRT2, abs=1e-12)
    assert by_vertex[2].closest_point[:2] == pytest.approx((1.0, 0.5))


def test_inside_vertex_negative():
    reference = unit_quad()
    original = Mesh(
        dimension=2,
        vertices=np.array([[0, 0, 0], [1, 0, 0], [0.9, 0.5, 0], [0, 1, 0]], float),
        cells=np.arange(4).reshape(1, 4),
    )
    _, records = _error_records(original, reference)
    by_vertex = {r.vertex: r for r in records}
    assert by_vertex[2].error == pytest.approx(-0.1 / SQRT2, abs=1e-12)


def test_point_inside_hole_counts_as_outside():
    reference = quad_grid(3, 3, holes=((1, 1),))
    # A tiny quad sitting inside the hole of the reference.
    original = Mesh(
        dimension=2,
        vertices=np.array(
            [[1.4, 1.4, 0], [1.6, 1.4, 0], [1.6, 1.6, 0], [1.4, 1.6, 0]], float
        ),
        cells=np.arange(4).reshape(1, 4),
    )
    _, records = _error_records(original, reference)
    assert all(r.error > 0 for r in records)


def test_sign_flips_under_reference_scaling():
    original = quad_grid(2, 2)
    for scale, sign in ((0.9, 1), (1.1, -1)):
        base = quad_grid(2, 2)
        center = base.vertices.mean(axis=0)
        verts = (base.vertices - center) * scale + center
        reference = Mesh(dimension=2, vertices=verts, cells=base.cells)
        _, records = _error_records(original, reference)
        assert all(np.sign(r.error) == sign for r in records)


def test_normalization_invariance_joint_scaling():
    rng = np.random.default_rng(4)
    base = quad_grid(3, 2)
    verts = base.vertices + np.pad(rng.uniform(-0.1, 0.1, (base.n_vertices, 2)), ((0, 0), (0, 1)))
    original = Mesh(dimension=2, vertices=verts, cells=base.cells)
    reference = quad_grid(3, 2)
    _, rec1 = _error_records(original, reference)
    s = 13.7
    original_s = Mesh(dimension=2, vertices=verts * s, cells=base.cells)
    reference_s = Mesh(dimension=2, vertices=reference.vertices * s, cells=reference.cells)
    _, rec2 = _error_records(original_s, reference_s)
    for a, b in zip(rec1, rec2):
        assert b.error == pytest.approx(a.error, abs=1e-9)


def test_error_bounded_by_hausdorff():
    rng = np.random.default_rng(8)
    base = quad_grid(2, 2)
    verts = base.vertices + np.pad(rng.uniform(-0.2, 0.2, (base.n_vertices, 2)), ((0, 0), (0, 1)))
    original = Mesh(dimension=2, vertices=verts, cells=base.cells)
    reference = quad_grid(2, 2)
    orig_adj = build_adjacency(original)
    ref_adj = build_adjacency(reference)
    loops, records = _error_records(original, reference)

    # Brute-force symmetric Hausdorff over boundary vertex samples plus
    # the directed vertex-to-segment distances.
    ref_loops = extract_boundary_2d(reference, ref_adj)
    orig_pts = np.vstack([original.vertices[l.vertices][:, :2] for l in loops])
    ref_pts = np.vstack([reference.vertices[l.vertices][:, :2] for l in ref_loops])
    d = np.linalg.norm(orig_pts[:, None] - ref_pts[None, :], axis=2)
    hausdorff = max(d.min(axis=1).max(), d.min(axis=0).max())
    diag = float(ref_adj.diagonal)
    for r in records:
        assert abs(r.error) <= hausdorff / diag + 1e-12


def test_empty_reference_rejected():
    with pytest.raises(ValueError, match="empty reference"):
        signed_boundary_error_2d(unit_quad(), _loops(unit_quad()), unit_quad(), [], 1.0)


# ---------------------------------------------------------------------------
# 3D error


def _hex_boundary(mesh):
    adj = build_adjacency(mesh)
    return extract_boundary_3d(mesh, adj)


def test_extract_boundary_3d_cube():
    mesh = hex_grid(2, 2, 2)
    surface = _hex_boundary(mesh)
    assert len(surface.quads) == 24
    assert len(surface.vertex_ids) == 26  # all but the interior vertex


def test_identity_3d_zero():
    mesh = hex_grid(1, 1, 1)
    surface = _hex_boundary(mesh)
    field = signed_boundary_error_3d(mesh, surface, unit_cube_surface())
    assert field.signed
    assert all(r.error == 0.0 for r in field.records)


def _probe_errors(points):
    """Boundary errors of free-floating probe vertices against the cube."""
    verts = np.asarray(points, dtype=float)

    class Surface:
        vertex_ids = np.arange(len(verts))

    class M:
        vertices = verts

    return signed_boundary_error_3d(M, Surface, unit_cube_surface())


def test_cube_outside_point():
    field = _probe_errors([[0.5, 0.5, 1.2]])
    assert field.records[0].error == pytest.approx(0.2 / SQRT3, abs=1e-9)
    assert field.records[0].closest_point == pytest.approx((0.5, 0.5, 1.0))


def test_cube_center_point():
    field = _probe_errors([[0.5, 0.5, 0.5]])
    assert field.records[0].error == pytest.approx(-0.5 / SQRT3, abs=1e-9)


def test_cube_edge_and_corner_regions():
    # Diagonal directions exercise edge/vertex pseudo-normals.
    field = _probe_errors([[1.2, 1.2, 0.5], [1.2, 1.2, 1.2]])
    assert field.records[0].error == pytest.approx(0.2 * SQRT2 / SQRT3, abs=1e-9)
    assert field.records[1].error == pytest.approx(0.2 * SQRT3 / SQRT3, abs=1e-9)


def test_open_reference_unsigned():
    surf = unit_cube_surface()
    open_ref = ReferenceSurface(
        vertices=surf.vertices, triangles=surf.triangles[:-2], closed=False
    )
    verts = np.array([[0.5, 0.5, 0.5]])

    class Surface:
        vertex_ids = np.arange(1)

    class M:
        vertices = verts

    field = signed_boundary_error_3d(M, Surface, open_ref)
    assert not field.signed
    assert field.records[0].error > 0  # magnitude only


def test_uv_transferred_from_reference():
    mesh = hex_grid(1, 1, 1)
    surface = _hex_boundary(mesh)
    field = signed_boundary_error_3d(mesh, surface, unit_cube_surface(uv=True))
    assert field.uv is not None
    assert field.uv.shape == (len(surface.vertex_ids), 2)


# ---------------------------------------------------------------------------
# series


def test_per_loop_series_flat():
    loops = _loops(unit_quad())
    records = _error_records(unit_quad(), unit_quad())[1]
    series = per_loop_series(loops, records)
    assert len(series) == 1
    verts, arc, errs = series[0]
    np.testing.assert_array_equal(verts, loops[0].vertices)
    np.testing.assert_allclose(errs, 0.0, atol=1e-12)


def test_per_loop_series_spike():
    reference = unit_quad()
    original = Mesh(
        dimension=2,
        vertices=np.array([[0, 0, 0], [1, 0, 0], [1.1, 0.5, 0], [0, 1, 0]], float),
        cells=np.arange(4).reshape(1, 4),
    )
    loops, records = _error_records(original, reference)
    _, _, errs = per_loop_series(loops, records)[0]
    nonzero = np.nonzero(np.abs(errs) > 1e-9)[0]
    assert len(nonzero) == 1


def test_per_loop_series_three_loops():
    mesh = merge_meshes(
        quad_grid(3, 3, holes=((1, 1),)),
        quad_grid(1, 1, spacing=0.5),
    )
    verts = mesh.vertices.copy()
    verts[-4:] += np.array([0.9, 0.9, 0.0])  # island inside the hole
    mesh = Mesh(dimension=2, vertices=verts, cells=mesh.cells)
    loops, records = _error_records(mesh, mesh)
    series = per_loop_series(loops, records)
    assert len(series) == 3


def test_collate_example():
    from hqview.boundary import BoundaryErrorRecord

    records = [
        BoundaryErrorRecord(0, (0, 0, 0), 0.2),
        BoundaryErrorRecord(1, (0, 0, 0), -0.1),
        BoundaryErrorRecord(2, (0, 0, 0), 0.0),
    ]
    c = collate(records)
    np.testing.assert_allclose(c.values, [-0.1, 0.0, 0.2])
    np.testing.assert_allclose(c.percentiles, [0.0, 0.5, 1.0])


def test_collate_ties_by_vertex_id():
    from hqview.boundary import BoundaryErrorRecord

    records = [BoundaryErrorRecord(v, (0, 0, 0), 0.5) for v in (3, 1, 2)]
    c = collate(records)
    np.testing.assert_array_equal(c.vertices, [1, 2, 3])


def test_collate_single_record():
    from hqview.boundary import BoundaryErrorRecord

    c = collate([BoundaryErrorRecord(0, (0, 0, 0), 0.3)])
    np.testing.assert_allclose(c.percentiles, [0.0])


def test_collate_monotone_random():
    from hqview.boundary import BoundaryErrorRecord

    rng = np.random.default_rng(1)
    records = [
        BoundaryErrorRecord(v, (0, 0, 0), float(e))
        for v, e in enumerate(rng.standard_normal(1000))
    ]
    c = collate(records)
    assert np.all(np.diff(c.values) >= 0)
    assert c.percentiles[0] == 0.0
    assert c.percentiles[-1] == 1.0
    assert c.values[0] == min(r.error for r in records)
    assert c.values[-1] == max(r.error for r in records)


def test_collate_empty_rejected():
    with pytest.raises(ValueError):
        collate([])
