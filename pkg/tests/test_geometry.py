"""Polytope reports: gauges, facets, face objects, cover and screen checks.

scipy.spatial.ConvexHull supplies an independent H-rep oracle for the facet
enumerator; everything else is checked against frozen desk examples and the
set-chain properties the face machinery must satisfy.
"""

from __future__ import annotations

import numpy as np
import pytest
import scipy.spatial
from hypothesis import given, settings
from hypothesis import strategies as st

from persist_reduce import (DegenerateDimension, Infeasible, NotInPos,
                            face_report, facet_enumerate, gauge_value,
                            in_convex_hull, interior_screen,
                            tangent_necessary_check, vertex_indices,
                            vertex_noncover_check)

SQUARE = np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]])


def test_gauge_axis_example():
    xi, beta = gauge_value(np.array([[1.0, 0.0], [0.0, 1.0]]),
                           np.array([2.0, 0.0]))
    assert xi == pytest.approx(2.0, abs=1e-10)
    np.testing.assert_allclose(beta, [2.0, 0.0], atol=1e-10)


def test_gauge_zero_target():
    xi, beta = gauge_value(np.array([[1.0, 0.0], [0.0, 1.0]]), np.zeros(2))
    assert xi == 0.0
    np.testing.assert_array_equal(beta, np.zeros(2))


def test_gauge_three_column_example():
    M = np.array([[1.0, 0.0, 0.6], [0.0, 1.0, 0.8]])
    xi, beta = gauge_value(M, np.array([2.0, 1.0]))
    assert xi == pytest.approx(2.5, abs=1e-10)
    np.testing.assert_allclose(beta, [1.25, 0.0, 1.25], atol=1e-10)


def test_gauge_infeasible_outside_cone():
    with pytest.raises(Infeasible):
        gauge_value(np.array([[1.0], [0.0]]), np.array([0.0, 1.0]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.1, 10.0))
def test_gauge_positive_homogeneity(seed, c):
    rng = np.random.default_rng(seed)
    M = rng.uniform(0.1, 1.0, size=(3, 5))
    theta = M @ rng.uniform(0.0, 1.0, size=5)
    xi1, _ = gauge_value(M, theta)
    xi2, _ = gauge_value(M, c * theta)
    assert xi2 == pytest.approx(c * xi1, abs=1e-10 * max(1.0, c * xi1))


def test_facets_of_square():
    K = facet_enumerate(SQUARE)
    assert K.offsets.shape[0] == 4
    # every facet is +-x<=1 or +-y<=1 after normalization
    for h, b in zip(K.normals, K.offsets):
        h = h / b
        assert sorted(np.abs(h).tolist()) == pytest.approx([0.0, 1.0], abs=1e-9)


def test_facets_of_triangle():
    K = facet_enumerate(np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))
    assert K.offsets.shape[0] == 3


def test_facets_reject_flat_cloud():
    with pytest.raises(DegenerateDimension):
        facet_enumerate(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_facets_match_hull_membership(seed):
    """H-rep contains() agrees with the lifted conic membership test and
    with scipy's ConvexHull equations on random probes (boundary-adjacent
    probes are skipped: there the answer is tolerance-defined)."""
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(int(rng.integers(4, 9)), 3))
    try:
        K = facet_enumerate(pts)
    except DegenerateDimension:
        return
    hull = scipy.spatial.ConvexHull(pts)
    probes = rng.normal(scale=1.5, size=(60, 3))
    for q in probes:
        margins = hull.equations[:, :3] @ q + hull.equations[:, 3]
        if np.abs(margins).min() < 1e-6:
            continue
        scipy_ans = bool(np.all(margins < 0))
        assert K.contains(q) == scipy_ans
        assert in_convex_hull(pts, q) == scipy_ans


def test_vertex_indices_square_plus_center():
    pts = np.vstack([SQUARE, [[0.0, 0.0]]])
    assert set(vertex_indices(pts)) == {0, 1, 2, 3}


def test_face_report_square_edge():
    K = facet_enumerate(SQUARE)
    rep = face_report(K, np.array([2.0, 0.5]))
    assert rep.xi == pytest.approx(2.0, abs=1e-9)
    assert len(rep.active) == 1
    # face hit is the x<=1 edge: vertices (1,1) and (1,-1) = rows 0,1
    assert set(rep.F_vertices) == {0, 1}
    assert set(rep.msh) == {0, 1}
    assert set(rep.W) == {0, 1}
    assert set(rep.X_extreme) == {0, 1}
    assert rep.xi_minus_y == pytest.approx(0.5, abs=1e-9)


def test_face_report_vertex_ray():
    K = facet_enumerate(SQUARE)
    rep = face_report(K, np.array([2.0, 2.0]))
    assert set(rep.F_vertices) == {0}  # the (1,1) corner alone


def test_face_report_interior_point():
    K = facet_enumerate(SQUARE)
    rep = face_report(K, np.array([0.5, 0.0]))
    assert rep.xi == pytest.approx(0.5, abs=1e-9)
    assert rep.X_extreme == ()  # shifted cone is the whole plane


def test_face_report_outside_cone():
    tri = np.array([[1.0, 0.0], [0.8, 0.6], [0.0, 0.0]])
    K = facet_enumerate(tri)
    with pytest.raises(NotInPos):
        face_report(K, np.array([-1.0, -1.0]))


def test_noncover_unit_circle_true():
    # distinct points on a strictly convex curve are all hull vertices,
    # provided y sits on the same curve (a far-outside y can cover mid-arc
    # points, which is a genuine cover, not a defect)
    ang = np.linspace(0.1, 1.3, 5)
    X = np.vstack([np.cos(ang), np.sin(ang)])
    y = np.array([np.cos(2.0), np.sin(2.0)])
    rep = vertex_noncover_check(X, y)
    assert rep.ok and all(rep.column_ok) and rep.y_ok and rep.distinct


def test_noncover_covered_column_false():
    X = np.array([[1.0, 0.0, 0.8], [0.0, 1.0, 0.6]])
    rep = vertex_noncover_check(X, np.array([2.0, 1.0]))
    assert not rep.ok
    assert rep.column_ok == (True, True, False)  # x3 = .4x1+.4x2+.2y
    assert rep.y_ok


def test_noncover_y_equals_column():
    X = np.array([[1.0, 0.0], [0.0, 1.0]])
    rep = vertex_noncover_check(X, np.array([1.0, 0.0]))
    assert not rep.ok and not rep.distinct


def test_tangent_check_consistency():
    r2 = np.sqrt(2) / 2
    X = np.array([[1.0, 0.0, r2], [0.0, 1.0, r2]])
    assert all(tangent_necessary_check(X, np.array([0.6, 0.8])))
    X_bad = np.array([[1.0, 0.0, 0.8], [0.0, 1.0, 0.6]])
    flags = tangent_necessary_check(X_bad, np.array([2.0, 1.0]))
    assert flags == (True, True, False)


def test_tangent_check_single_column():
    assert tangent_necessary_check(np.array([[1.0], [0.0]]),
                                   np.array([0.0, 2.0])) == (True,)


def test_interior_screen_frozen():
    X = np.array([[1.0, 0.0, 0.3], [0.0, 1.0, 0.3]])
    assert set(interior_screen(X)) == {2}
    ang = np.linspace(0.1, 1.3, 5)
    circle = np.vstack([np.cos(ang), np.sin(ang)])
    assert interior_screen(circle) == ()
    dup = np.array([[1.0, 1.0], [0.0, 0.0]])
    assert interior_screen(dup) == ()  # duplicates sit on the boundary


def _poked_instance(seed):
    """Random 2/3-D polytope with 0 strictly interior and a y that pokes out
    past a single facet: xi(y; K) > 1 while xi(y; K\\y) < 1, y not a multiple
    of any vertex. These are the hypotheses under which the face objects
    collapse into the msh = X_extreme = W chain."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    pts = rng.normal(size=(int(rng.integers(n + 2, 9)), n))
    pts -= pts.mean(axis=0)
    try:
        K = facet_enumerate(pts)
    except DegenerateDimension:
        return None
    if not K.contains(np.zeros(n)) or np.any(K.offsets < 1e-6):
        return None
    verts = vertex_indices(pts)
    V = pts[verts]
    f = int(rng.integers(0, K.normals.shape[0]))
    on_f = np.abs(V @ K.normals[f] - K.offsets[f]) <= 1e-9
    if not on_f.any():
        return None
    centroid = V[on_f].mean(axis=0)
    for t in (1.5, 1.2, 1.05, 1.01, 1.002):
        y = t * centroid
        rep = face_report(K, y)
        if rep.xi > 1.0 + 1e-9 and rep.xi_minus_y < 1.0 - 1e-9:
            break
    else:
        return None
    unit_y = y / np.linalg.norm(y)
    vn = V / np.linalg.norm(V, axis=1, keepdims=True)
    if np.any(vn @ unit_y > 1.0 - 1e-9):
        return None
    return K, V, y, rep


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_noncover_random_polytopes(seed):
    """y outside past one facet with xi(y; K\\y) < 1: every polytope vertex
    and y itself are vertices of conv(K u {y})."""
    inst = _poked_instance(seed)
    if inst is None:
        return
    _, V, y, _ = inst
    nc = vertex_noncover_check(V.T, y)
    assert nc.ok


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_face_chain_random_polytopes(seed):
    """Same sampling: F_vertices <= msh = X_extreme = W, with equality of
    F_vertices and msh when the supporting face is a single facet."""
    inst = _poked_instance(seed)
    if inst is None:
        return
    _, _, _, rep = inst
    assert set(rep.F_vertices) <= set(rep.msh)
    assert set(rep.msh) == set(rep.X_extreme) == set(rep.W)
    if len(rep.active) == 1:
        assert set(rep.F_vertices) == set(rep.msh)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_noncover_implies_tangent_pass(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    p = int(rng.integers(2, 7))
    X = rng.normal(size=(n, p))
    y = rng.normal(size=n)
    rep = vertex_noncover_check(X, y)
    if not rep.ok:
        return
    assert all(tangent_necessary_check(X, y))
