import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hqview.mesh_io import Mesh, build_adjacency
from hqview.quality import (
    all_corner_jacobians,
    compute_quality_field,
    corner_scaled_jacobian,
    quality_histogram,
)
from hqview.synth import hex_grid, random_convex_hex
from conftest import SHEAR, UNIT_CUBE, single_hex, unit_quad

SQRT1_2 = 1.0 / np.sqrt(2.0)


def test_unit_cube_corners_are_one(unit_hex):
    for corner in range(8):
        assert corner_scaled_jacobian(unit_hex, 0, corner) == pytest.approx(1.0, abs=1e-12)


def test_mirrored_cube_corners_are_minus_one():
    mirrored = UNIT_CUBE * np.array([-1.0, 1.0, 1.0])
    mesh = single_hex(mirrored)
    for corner in range(8):
        assert corner_scaled_jacobian(mesh, 0, corner) == pytest.approx(-1.0, abs=1e-12)


def test_sheared_corner_is_inv_sqrt2(sheared_hex):
    # det of normalized edges (1,0,0), (1,1,0)/sqrt(2), (0,0,1) by hand.
    assert corner_scaled_jacobian(sheared_hex, 0, 0) == pytest.approx(SQRT1_2, abs=1e-12)


def test_unit_square_quad_corners():
    mesh = unit_quad()
    for corner in range(4):
        assert corner_scaled_jacobian(mesh, 0, corner) == pytest.approx(1.0, abs=1e-12)


def test_flat_quad_corner_is_zero():
    # Corner 0's edges run to (1,0) and (-1,0): collinear, zero area.
    verts = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [-1, 0, 0]], dtype=np.float64)
    mesh = Mesh(dimension=2, vertices=verts, cells=np.arange(4).reshape(1, 4))
    assert corner_scaled_jacobian(mesh, 0, 0) == pytest.approx(0.0, abs=1e-12)


def test_degenerate_edge_maps_to_worst():
    verts = UNIT_CUBE.copy()
    verts[1] = verts[0]  # zero-length edge at corner 0
    mesh = Mesh(
        dimension=3,
        vertices=verts,
        cells=np.arange(8).reshape(1, 8),
    )
    assert corner_scaled_jacobian(mesh, 0, 0) == -1.0


def test_index_errors(unit_hex):
    with pytest.raises(IndexError):
        corner_scaled_jacobian(unit_hex, 1, 0)
    with pytest.raises(IndexError):
        corner_scaled_jacobian(unit_hex, 0, 8)


def test_field_single_cube(unit_hex):
    adj = build_adjacency(unit_hex)
    field = compute_quality_field(unit_hex, adj)
    np.testing.assert_allclose(field.vertex_quality, 1.0, atol=1e-12)
    assert field.q_m == pytest.approx(1.0)
    assert field.corner_jacobians(0) == [(0, pytest.approx(1.0))]


def test_field_min_rule(sheared_hex):
    adj = build_adjacency(sheared_hex)
    field = compute_quality_field(sheared_hex, adj)
    per_cell = all_corner_jacobians(sheared_hex)
    for v in range(8):
        expected = min(per_cell[0, c] for c in range(8) if sheared_hex.cells[0, c] == v)
        assert field.vertex_quality[v] == pytest.approx(expected)


def test_median_odd():
    assert float(np.median([0.1, 0.5, 0.9])) == pytest.approx(0.5)


def test_median_even_is_midpoint():
    assert float(np.median([0.2, 0.4, 0.6, 0.8])) == pytest.approx(0.5)


class _FakeField:
    def __init__(self, q):
        self.vertex_quality = np.asarray(q, dtype=np.float64)
        self.q_m = float(np.median(q)) if len(q) else 1.0
        self.n_vertices = len(q)


def test_histogram_all_perfect():
    hist = quality_histogram(_FakeField([1.0, 1.0]), 4)
    np.testing.assert_array_equal(hist.counts, [0, 0, 0, 2])


def test_histogram_boundary_goes_up():
    hist = quality_histogram(_FakeField([-1.0, 0.0, 1.0]), 2)
    np.testing.assert_array_equal(hist.counts, [1, 2])


def test_histogram_empty():
    hist = quality_histogram(_FakeField([]), 3)
    np.testing.assert_array_equal(hist.counts, [0, 0, 0])
    assert len(hist.sorted_vertices) == 0


def test_histogram_zero_bins_rejected():
    with pytest.raises(ValueError):
        quality_histogram(_FakeField([0.5]), 0)


def test_sorted_vertices_ties_by_id():
    hist = quality_histogram(_FakeField([0.5, 0.2, 0.5, 0.2]), 4)
    np.testing.assert_array_equal(hist.sorted_vertices, [1, 3, 0, 2])


def _random_rotation(rng):
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_rigid_motion_invariance(seed):
    rng = np.random.default_rng(seed)
    corners = random_convex_hex(rng)
    base = all_corner_jacobians(single_hex(corners))
    rot = _random_rotation(rng)
    shift = rng.uniform(-10, 10, size=3)
    moved = all_corner_jacobians(single_hex(corners @ rot.T + shift))
    np.testing.assert_allclose(moved, base, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(
    st.integers(min_value=0, max_value=2**32 - 1),
    st.floats(min_value=1e-3, max_value=1e3),
)
def test_uniform_scale_invariance(seed, scale):
    rng = np.random.default_rng(seed)
    corners = random_convex_hex(rng)
    base = all_corner_jacobians(single_hex(corners))
    scaled = all_corner_jacobians(single_hex(corners * scale))
    np.testing.assert_allclose(scaled, base, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_reflection_antisymmetry(seed):
    rng = np.random.default_rng(seed)
    corners = random_convex_hex(rng)
    base = all_corner_jacobians(single_hex(corners))
    mirrored = all_corner_jacobians(single_hex(corners * np.array([1.0, -1.0, 1.0])))
    np.testing.assert_allclose(mirrored, -base, atol=1e-9)


def test_jm_monotone_under_corner_growth():
    # J_m over a 2x1x1 block never exceeds the single-cell J_m at shared
    # vertices: more incident corners can only lower the minimum.
    rng = np.random.default_rng(7)
    mesh = hex_grid(2, 1, 1)
    verts = mesh.vertices + rng.uniform(-0.2, 0.2, mesh.vertices.shape)
    mesh = Mesh(dimension=3, vertices=verts, cells=mesh.cells)
    adj = build_adjacency(mesh)
    both = compute_quality_field(mesh, adj)

    sub = Mesh(dimension=3, vertices=verts, cells=mesh.cells[:1])
    sub_adj = build_adjacency(sub)
    one = compute_quality_field(sub, sub_adj)
    for v in np.unique(mesh.cells[0]):
        assert both.vertex_quality[v] <= one.vertex_quality[v] + 1e-15


def test_triple_product_oracle_arbitrary_precision():
    # Independent evaluation: e1.(e2 x e3) / (|e1||e2||e3|) with 50-digit
    # arithmetic, against the float implementation.
    from mpmath import mp, mpf, sqrt

    mp.dps = 50
    rng = np.random.default_rng(123)
    from hqview.quality import HEX_CORNER_NEIGHBORS

    for _ in range(20):
        corners = random_convex_hex(rng)
        mesh = single_hex(corners)
        jac = all_corner_jacobians(mesh)
        for i, (n1, n2, n3) in enumerate(HEX_CORNER_NEIGHBORS):
            es = [[mpf(corners[n][k]) - mpf(corners[i][k]) for k in range(3)] for n in (n1, n2, n3)]
            e1, e2, e3 = es
            cross = [
                e2[1] * e3[2] - e2[2] * e3[1],
                e2[2] * e3[0] - e2[0] * e3[2],
                e2[0] * e3[1] - e2[1] * e3[0],
            ]
            triple = sum(a * b for a, b in zip(e1, cross))
            norms = [sqrt(sum(c * c for c in e)) for e in es]
            expected = triple / (norms[0] * norms[1] * norms[2])
            assert abs(jac[0, i] - float(expected)) < 1e-12
