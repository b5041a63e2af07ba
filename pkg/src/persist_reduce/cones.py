"""Conic-hull membership with certificates, plus base directions and the
ratio argmax used by the extreme-ray search.

Membership of a query q in pos{z_1, ..., z_k} is decided by an active-set
nonnegative least squares solve (Lawson-Hanson). The two outcomes are
mutually exclusive certificates:

  inside   coefficients lam >= 0 with ||Z lam - q|| <= feas_eps
  outside  a separating functional v = r / ||r||^2 built from the NNLS
           residual r, satisfying <v, q> = 1 and <v, z_i> <= lp_eps

The scalar theta in {0, 1} reported on the certificate equals the optimum
of the separation LP  max{ <v, q> : <v, z_i> <= 0, <v, q> <= 1 }, which the
test suite cross-checks against an independent simplex solve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MaxIterations, NotPointed, ZeroColumn
from .numerics import DEFAULT_TOL, Tolerances, as_matrix, as_vector
from .simplex import solve_inequality_lp


@dataclass(frozen=True)
class RaySet:
    """A finite set of nonzero generators, one per row, with an optional
    base direction g satisfying <g, z_i> > 0 for every generator (the
    certificate that the conic hull is pointed)."""

    rays: np.ndarray                 # (p, n), one generator per row
    base: np.ndarray | None = None   # (n,), strictly positive inner products

    def __post_init__(self):
        rays = as_matrix(self.rays, "rays")
        if rays.shape[0] == 0:
            raise ValueError("RaySet needs at least one ray")
        norms = np.sqrt(np.einsum("ij,ij->i", rays, rays))
        bad = np.flatnonzero(norms <= DEFAULT_TOL.feas_eps)
        if bad.size:
            raise ZeroColumn(int(bad[0]))
        rays.flags.writeable = False
        object.__setattr__(self, "rays", rays)
        if self.base is not None:
            base = as_vector(self.base, "base")
            if base.shape[0] != rays.shape[1]:
                raise ValueError("base dimension mismatch")
            if np.min(rays @ base) <= DEFAULT_TOL.feas_eps:
                raise ValueError("base is not strictly positive on all rays")
            base.flags.writeable = False
            object.__setattr__(self, "base", base)

    @property
    def ambient_dim(self) -> int:
        return self.rays.shape[1]

    def __len__(self) -> int:
        return self.rays.shape[0]


@dataclass(frozen=True)
class MembershipCertificate:
    inside: bool
    lam: np.ndarray | None       # nonnegative coefficients when inside
    v: np.ndarray | None         # separating functional when outside
    theta: float                 # 0.0 inside, 1.0 outside
    residual_norm: float


def nnls(A, b, tol: Tolerances = DEFAULT_TOL, max_iter: int | None = None):
    """Active-set NNLS: argmin_{lam >= 0} ||A lam - b||_2.

    Returns (lam, residual) with residual = b - A lam. At exit the KKT
    conditions hold: A.T residual <= lp_eps componentwise and
    <residual, A lam> = 0 up to roundoff. Entering ties break toward the
    lowest index; a hard cap of 50 * cols inner iterations raises
    MaxIterations rather than cycling.
    """
    A = as_matrix(A, "A")
    b = as_vector(b, "b")
    m, n = A.shape
    if b.shape[0] != m:
        raise ValueError("A and b shapes disagree")
    if max_iter is None:
        max_iter = 50 * max(n, 1)

    x = np.zeros(n)
    if n == 0:
        return x, b.copy()
    passive = np.zeros(n, dtype=bool)
    resid = b.copy()
    iters = 0
    while True:
        w = A.T @ resid
        free = ~passive
        if not free.any():
            break
        wmax = w[free].max()
        if wmax <= tol.lp_eps:
            break
        cand = np.flatnonzero(free & (w >= wmax - tol.lp_eps))
        passive[int(cand[0])] = True
        while True:
            iters += 1
            if iters > max_iter:
                raise MaxIterations("nnls active-set cap exceeded")
            idx = np.flatnonzero(passive)
            z = np.linalg.lstsq(A[:, idx], b, rcond=None)[0]
            if z.min() > tol.lp_eps:
                x[:] = 0.0
                x[idx] = z
                break
            xi = x[idx]
            neg = z <= tol.lp_eps
            denom = xi[neg] - z[neg]
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(denom > 0, xi[neg] / denom, 0.0)
            alpha = float(ratios.min())
            xi = xi + alpha * (z - xi)
            x[:] = 0.0
            x[idx] = np.maximum(xi, 0.0)
            drop = idx[x[idx] <= tol.lp_eps]
            x[drop] = 0.0
            passive[drop] = False
            if not passive.any():
                break
        resid = b - A @ x
    return x, resid


def conic_membership(Z, query, tol: Tolerances = DEFAULT_TOL) -> MembershipCertificate:
    """Decide query in pos{rows of Z} and return the matching certificate.

    Z may be a RaySet or a (k, n) array of generator rows; k = 0 is allowed
    (the hull is {0}, so any admissible query is outside). The query must be
    nonzero.
    """
    rows = Z.rays if isinstance(Z, RaySet) else as_matrix(Z, "Z")
    q = as_vector(query, "query")
    if np.linalg.norm(q) <= tol.feas_eps:
        raise ZeroColumn(-1)
    lam, resid = nnls(rows.T, q, tol)
    rnorm = float(np.linalg.norm(resid))
    if rnorm <= tol.feas_eps:
        return MembershipCertificate(True, lam, None, 0.0, rnorm)
    v = resid / (rnorm * rnorm)
    return MembershipCertificate(False, None, v, 1.0, rnorm)


def find_base(Z, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """A direction g with <g, z_i> > 0 for all generators, or NotPointed.

    Tries the normalized-mean heuristic first; on failure solves
    max{ t : <g, z_i> >= t, ||g||_inf <= 1 } by simplex and declares the
    hull not pointed when the optimum is <= feas_eps.
    """
    rows = Z.rays if isinstance(Z, RaySet) else as_matrix(Z, "Z")
    p, n = rows.shape
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    unit = rows / norms
    g = unit.sum(axis=0)
    if np.linalg.norm(g) > tol.feas_eps:
        g = g / np.linalg.norm(g)
        if np.min(rows @ g) > tol.feas_eps:
            return g

    # variables: g+ (n), g- (n), t+ , t-
    nv = 2 * n + 2
    A = np.zeros((p + 2 * n, nv))
    b = np.zeros(p + 2 * n)
    A[:p, :n] = -unit
    A[:p, n:2 * n] = unit
    A[:p, 2 * n] = 1.0
    A[:p, 2 * n + 1] = -1.0
    A[p:p + n, :n] = np.eye(n)
    A[p:p + n, n:2 * n] = -np.eye(n)
    b[p:p + n] = 1.0
    A[p + n:, :n] = -np.eye(n)
    A[p + n:, n:2 * n] = np.eye(n)
    b[p + n:] = 1.0
    c = np.zeros(nv)
    c[2 * n] = -1.0
    c[2 * n + 1] = 1.0
    x, value = solve_inequality_lp(c, A, b, tol)
    t = -value
    if t <= tol.feas_eps:
        raise NotPointed(f"best margin {t:.3e} <= feas_eps")
    g = x[:n] - x[n:2 * n]
    if np.min(rows @ g) <= tol.feas_eps:
        raise NotPointed("LP base failed strict positivity re-check")
    return g


def angular_argmax(v, Z, candidates, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Indices among `candidates` maximizing <v, z_k> / <g, z_k>.

    g is the base of the RaySet (required). The maximizing base-slice points
    form an exposed face of the hull; ties within a relative align_eps band
    of the maximum are all returned, sorted ascending.
    """
    if not isinstance(Z, RaySet) or Z.base is None:
        raise ValueError("angular_argmax needs a RaySet with a base")
    cand = np.asarray(candidates, dtype=np.int64)
    if cand.size == 0:
        raise ValueError("empty candidate set")
    v = as_vector(v, "v")
    num = Z.rays[cand] @ v
    den = Z.rays[cand] @ Z.base
    ratios = num / den
    best = ratios.max()
    band = tol.align_eps * max(1.0, abs(best))
    return np.sort(cand[ratios >= best - band])
