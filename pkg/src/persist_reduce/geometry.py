"""Polytope gauge geometry at desk scale.

Facet enumeration is a brute-force scan over vertex n-subsets (capped at
ambient dimension 4 and 60 points), gauge values come from an exact simplex
solve over the vertex hull, and the face/overlap reports follow the
H-representation conventions  K = intersect_i { z : <h_i, z> <= b_i }.

Point matrices in this module store one point per ROW; design matrices
passed to the condition checks keep the package-wide column convention.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .cones import RaySet, conic_membership
from .errors import DegenerateDimension, Infeasible, NotInPos, NotPointed
from .numerics import DEFAULT_TOL, Tolerances, as_matrix, as_vector
from .rays import extreme_rays
from .simplex import solve_standard_lp

_SCREEN_EPS = 1e-6      # relative inflation used by the interior screen
_ACT_EPS = 1e-7         # activation slack for facet incidence predicates


def gauge_value(M, theta, tol: Tolerances = DEFAULT_TOL):
    """Gauge of theta w.r.t. conv{columns of M}: min{1'b : M b = theta, b >= 0}.

    Returns (xi, beta) with beta an optimal vertex solution. theta = 0 gives
    (0, zeros) without a solve. Raises Infeasible when theta is outside
    pos conv{columns}.
    """
    M = as_matrix(M, "M")
    theta = as_vector(theta, "theta")
    if M.shape[0] != theta.shape[0]:
        raise ValueError("M and theta dimensions disagree")
    if np.linalg.norm(theta) <= tol.feas_eps:
        return 0.0, np.zeros(M.shape[1])
    beta, value = solve_standard_lp(np.ones(M.shape[1]), M, theta, tol)
    return float(value), beta


def in_convex_hull(points, q, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Convex-hull membership via the lifted conic test on (point; 1) rows."""
    pts = as_matrix(points, "points")
    q = as_vector(q, "q")
    if pts.shape[0] == 0:
        return False
    lifted = np.hstack([pts, np.ones((pts.shape[0], 1))])
    query = np.concatenate([q, [1.0]])
    return conic_membership(lifted, query, tol).inside


def vertex_indices(points, tol: Tolerances = DEFAULT_TOL) -> list[int]:
    """Rows of `points` that are vertices of their convex hull
    (a point is a vertex iff it is outside the hull of the others)."""
    pts = as_matrix(points, "points")
    m = pts.shape[0]
    out = []
    for i in range(m):
        others = np.delete(pts, i, axis=0)
        if not in_convex_hull(others, pts[i], tol):
            out.append(i)
    return out


@dataclass(frozen=True)
class PolytopeHRep:
    """Facet description: normals (f, n) rows h_i, offsets b_i, and the
    point rows the description was enumerated from."""

    normals: np.ndarray
    offsets: np.ndarray
    source_vertices: np.ndarray | None = None

    def __post_init__(self):
        H = as_matrix(self.normals, "normals")
        b = as_vector(self.offsets, "offsets")
        if H.shape[0] != b.shape[0]:
            raise ValueError("normals/offsets length mismatch")
        H.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "normals", H)
        object.__setattr__(self, "offsets", b)
        if self.source_vertices is not None:
            V = as_matrix(self.source_vertices, "source_vertices")
            V.flags.writeable = False
            object.__setattr__(self, "source_vertices", V)

    def contains(self, z, tol: Tolerances = DEFAULT_TOL) -> bool:
        z = as_vector(z, "z")
        return bool(np.all(self.normals @ z <= self.offsets + tol.feas_eps))


def facet_enumerate(V, tol: Tolerances = DEFAULT_TOL) -> PolytopeHRep:
    """Brute-force H-representation of conv{rows of V}.

    Fits a hyperplane through every n-subset of points and keeps it when all
    points fall on one side. Deduplicates up to sign/scale. Capped at n <= 4
    and 60 points; raises DegenerateDimension when the points do not
    affinely span R^n.
    """
    V = as_matrix(V, "V")
    m, n = V.shape
    if n > 4 or m > 60:
        raise ValueError("facet enumeration capped at dimension 4 / 60 points")
    if m < n + 1:
        raise DegenerateDimension("need at least n+1 points")
    centered = V - V.mean(axis=0)
    if np.linalg.matrix_rank(centered, tol=1e-10) < n:
        raise DegenerateDimension("points do not affinely span the ambient space")

    found: list[tuple[np.ndarray, float]] = []
    for subset in itertools.combinations(range(m), n):
        pts = V[list(subset)]
        diffs = pts[1:] - pts[0]
        if n == 1:
            h = np.ones(1)
        else:
            _, s, vt = np.linalg.svd(diffs)
            if s[:n - 1].min() <= 1e-10 * max(1.0, s.max()):
                continue  # affinely dependent subset: spans no unique hyperplane
            h = vt[-1]
        h = h / np.linalg.norm(h)
        b = float(h @ pts[0])
        d = V @ h - b
        if d.max() <= _ACT_EPS:
            cand = (h, b)
        elif d.min() >= -_ACT_EPS:
            cand = (-h, -b)
        else:
            continue
        if not any(abs(cand[1] - b0) <= 1e-8 and np.allclose(cand[0], h0, atol=1e-8)
                   for h0, b0 in found):
            found.append(cand)
    H = np.array([h for h, _ in found])
    b = np.array([b0 for _, b0 in found])
    return PolytopeHRep(H, b, V)


def _xi_hrep(K: PolytopeHRep, z, skip=(), tol: Tolerances = DEFAULT_TOL) -> float:
    """Gauge of z w.r.t. the polyhedron of K's constraints minus `skip`.

    inf{lam >= 0 : <h_i, z> <= lam b_i}; +inf when that set is empty.
    """
    z = as_vector(z, "z")
    lower, upper = 0.0, np.inf
    skip = set(skip)
    for i in range(K.normals.shape[0]):
        if i in skip:
            continue
        c = float(K.normals[i] @ z)
        b = float(K.offsets[i])
        if b > tol.feas_eps:
            lower = max(lower, c / b)
        elif b < -tol.feas_eps:
            if c > 0.0:
                return np.inf
            upper = min(upper, c / b)
        elif c > tol.feas_eps:
            return np.inf
    return lower if lower <= upper + tol.feas_eps else np.inf


@dataclass(frozen=True)
class FaceReport:
    """Incidence data of a direction y against a polytope K (0-based sets).

    xi             gauge of y w.r.t. K
    active         facets i with <h_i, y> = b_i * xi
    active_nonzero active facets with b_i > 0
    F_vertices     vertices of K on every active facet (the touched face)
    msh            vertices on at least one active nonzero-offset facet
    W              nonzero vertices sharing an active facet with y
    X_extreme      nonzero vertices whose shift v - y is an extreme ray of
                   pos{K - y}
    xi_minus_y     gauge of y w.r.t. K with the active facets removed
    """

    xi: float
    active: tuple[int, ...]
    active_nonzero: tuple[int, ...]
    F_vertices: tuple[int, ...]
    msh: tuple[int, ...]
    W: tuple[int, ...]
    X_extreme: tuple[int, ...]
    xi_minus_y: float


def face_report(K: PolytopeHRep, y, tol: Tolerances = DEFAULT_TOL) -> FaceReport:
    """Full incidence report for 0 != y in pos(K). Needs source_vertices."""
    if K.source_vertices is None:
        raise ValueError("face_report needs an H-rep with source_vertices")
    y = as_vector(y, "y")
    V = K.source_vertices
    verts = vertex_indices(V, tol)
    try:
        xi, _ = gauge_value(V[verts].T, y, tol)
    except Infeasible as e:
        raise NotInPos("y is not in the conic hull of K") from e

    Hy = K.normals @ y
    act = np.flatnonzero(np.abs(Hy - K.offsets * xi) <= _ACT_EPS * max(1.0, abs(xi)))
    active = tuple(int(i) for i in act)
    active_nonzero = tuple(i for i in active if K.offsets[i] > tol.feas_eps)

    on_facet = np.abs(V[verts] @ K.normals.T - K.offsets) <= _ACT_EPS
    act_mask = np.zeros(K.normals.shape[0], dtype=bool)
    act_mask[list(active)] = True
    nz_mask = np.zeros_like(act_mask)
    nz_mask[list(active_nonzero)] = True

    F_vertices, msh, W = [], [], []
    for row, vi in enumerate(verts):
        inc = on_facet[row]
        if active and inc[act_mask].all():
            F_vertices.append(vi)
        if inc[nz_mask].any():
            msh.append(vi)
        vnorm = np.linalg.norm(V[vi])
        if vnorm > tol.feas_eps:
            xi_v = _xi_hrep(K, V[vi], tol=tol)
            jv = np.abs(V[vi] @ K.normals.T - K.offsets * xi_v) <= _ACT_EPS * max(1.0, abs(xi_v))
            if (jv & act_mask).any():
                W.append(vi)

    shifted, ids = [], []
    for vi in verts:
        ray = V[vi] - y
        if np.linalg.norm(ray) > tol.feas_eps:
            shifted.append(ray)
            ids.append(vi)
    X_extreme: tuple[int, ...] = ()
    if shifted:
        try:
            res = extreme_rays(RaySet(np.array(shifted)), tol)
        except NotPointed:
            # y interior to K: the shifted cone is a full linear space and
            # owns no extreme rays at all.
            res = None
        if res is not None:
            X_extreme = tuple(ids[i] for i in res.kept
                              if np.linalg.norm(V[ids[i]]) > tol.feas_eps)

    xi_minus = _xi_hrep(K, y, skip=active, tol=tol)
    return FaceReport(float(xi), active, active_nonzero, tuple(F_vertices),
                      tuple(msh), tuple(W), X_extreme, float(xi_minus))


@dataclass(frozen=True)
class NonCoverReport:
    """Outcome of the vertex non-cover condition for (X, y_scaled)."""

    ok: bool
    column_ok: tuple[bool, ...]
    y_ok: bool
    distinct: bool


def vertex_noncover_check(X, y_scaled, tol: Tolerances = DEFAULT_TOL) -> NonCoverReport:
    """Every column of X and y itself must be a vertex of
    conv{columns of X, y}, and y must differ from every column.

    Columns are tested against the hull of the other columns plus y (via the
    lifted conic test), so duplicated columns fail. X is column-oriented.
    """
    X = as_matrix(X, "X")
    y = as_vector(y_scaled, "y_scaled")
    pts = X.T
    p = pts.shape[0]
    distinct = bool(np.all(np.linalg.norm(pts - y, axis=1) > tol.feas_eps))
    col_ok = []
    for i in range(p):
        others = np.vstack([np.delete(pts, i, axis=0), y])
        col_ok.append(not in_convex_hull(others, pts[i], tol))
    y_ok = not in_convex_hull(pts, y, tol)
    ok = distinct and y_ok and all(col_ok)
    return NonCoverReport(ok, tuple(col_ok), y_ok, distinct)


def tangent_necessary_check(X, y, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, ...]:
    """Necessary inclusion test per column: passes iff x_i - y is NOT in the
    tangent cone of conv{columns} at x_i, i.e. pos{x_k - x_i : k != i}.

    A single column passes trivially (the tangent cone is {0} and y != x_i
    makes the query nonzero). y equal to a column fails at that column.
    """
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    pts = X.T
    out = []
    for i in range(pts.shape[0]):
        query = pts[i] - y
        if np.linalg.norm(query) <= tol.feas_eps:
            out.append(False)
            continue
        gens = np.delete(pts, i, axis=0) - pts[i]
        gens = gens[np.linalg.norm(gens, axis=1) > tol.feas_eps]
        if gens.shape[0] == 0:
            out.append(True)
            continue
        out.append(not conic_membership(gens, query, tol).inside)
    return tuple(out)


def interior_screen(X, tol: Tolerances = DEFAULT_TOL) -> tuple[int, ...]:
    """Columns whose coefficient is zero in every gauge-penalized optimum.

    Column i is removable when (1 + eps) x_i lies in conv({0, x_k : k != i}):
    the slightly inflated point still being covered certifies that x_i can
    be rewritten through the others with strictly smaller coefficient mass.
    """
    X = as_matrix(X, "X")
    pts = X.T
    p, n = pts.shape
    removable = []
    for i in range(p):
        others = np.vstack([np.zeros((1, n)), np.delete(pts, i, axis=0)])
        if in_convex_hull(others, (1.0 + _SCREEN_EPS) * pts[i], tol):
            removable.append(i)
    return tuple(removable)
