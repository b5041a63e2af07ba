"""Dense two-phase simplex for the small exact LPs used across the package.

Tableau form with Bland's anti-cycling rule, so every solve terminates and
is deterministic. Intended for desk-scale problems (hundreds of rows); the
screening path never depends on this module, which keeps it usable as an
independent cross-check oracle for the conic-membership certificates.
"""

from __future__ import annotations

import numpy as np

from .errors import Infeasible, MaxIterations, Unbounded
from .numerics import DEFAULT_TOL, Tolerances, as_matrix, as_vector

_PIVOT_EPS = 1e-11


def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    piv = T[row]
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0.0:
            T[i] -= T[i, col] * piv
    basis[row] = col


def _run(T, basis, cost, allowed, tol, max_iter):
    """Bland-rule simplex on tableau T (m x (N+1), last col = rhs >= 0).

    `allowed` marks columns that may enter. Pivots in place; raises
    Unbounded if a negative reduced cost column has no positive entry.
    Returns the objective value of the final basis.
    """
    m = T.shape[0]
    it = 0
    while True:
        it += 1
        if it > max_iter:
            raise MaxIterations("simplex pivot cap exceeded")
        cb = cost[basis]
        red = cost[:-1] - cb @ T[:, :-1]
        cand = np.flatnonzero(allowed & (red < -tol.lp_eps))
        if cand.size == 0:
            return float(cb @ T[:, -1])
        j = int(cand[0])  # Bland: lowest eligible index enters
        col = T[:, j]
        rows = np.flatnonzero(col > _PIVOT_EPS)
        if rows.size == 0:
            raise Unbounded("no blocking row for entering column")
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + _PIVOT_EPS]
        # Bland tie-break: leave the tied row whose basic variable index is lowest
        r = int(tied[np.argmin([basis[i] for i in tied])])
        _pivot(T, basis, r, j)


def solve_standard_lp(c, A, b, tol: Tolerances = DEFAULT_TOL, max_iter: int | None = None):
    """min c@x  s.t.  A@x = b, x >= 0.  Returns (x, value).

    Two phases: artificial variables enter a phase-1 feasibility program;
    positive phase-1 optimum raises Infeasible. Redundant equality rows are
    dropped when their artificial cannot be pivoted out. The solution is an
    optimal basic (vertex) solution.
    """
    A = as_matrix(A, "A")
    b = as_vector(b, "b")
    c = as_vector(c, "c")
    m, n = A.shape
    if b.shape[0] != m or c.shape[0] != n:
        raise ValueError("inconsistent LP shapes")
    if max_iter is None:
        max_iter = 2000 + 50 * (m + n)

    sgn = np.where(b < 0.0, -1.0, 1.0)
    T = np.zeros((m, n + m + 1))
    T[:, :n] = A * sgn[:, None]
    T[:, n:n + m] = np.eye(m)
    T[:, -1] = b * sgn
    basis = list(range(n, n + m))

    cost1 = np.zeros(n + m + 1)
    cost1[n:n + m] = 1.0
    allowed = np.ones(n + m, dtype=bool)
    val1 = _run(T, basis, cost1, allowed, tol, max_iter)
    if val1 > 1e-8:
        raise Infeasible(f"phase-1 optimum {val1:.3e} > 0")

    # pivot artificials out of the basis, or drop redundant rows
    keep_rows = np.ones(m, dtype=bool)
    for i in range(m):
        if basis[i] >= n:
            sub = np.flatnonzero(np.abs(T[i, :n]) > _PIVOT_EPS)
            if sub.size:
                _pivot(T, basis, i, int(sub[0]))
            else:
                keep_rows[i] = False
    if not keep_rows.all():
        T = T[keep_rows]
        basis = [bv for bv, k in zip(basis, keep_rows) if k]

    T = np.hstack([T[:, :n], T[:, -1:]])
    cost2 = np.concatenate([c, [0.0]])
    allowed2 = np.ones(n, dtype=bool)
    value = _run(T, basis, cost2, allowed2, tol, max_iter)

    x = np.zeros(n)
    for i, bv in enumerate(basis):
        x[bv] = max(T[i, -1], 0.0)
    return x, value


def solve_inequality_lp(c, A_ub, b_ub, tol: Tolerances = DEFAULT_TOL,
                        max_iter: int | None = None):
    """min c@x  s.t.  A_ub@x <= b_ub, x >= 0, with b_ub >= 0.

    Nonnegative right-hand sides let the slack basis start feasible, so no
    phase 1 is needed. Returns (x, value).
    """
    A = as_matrix(A_ub, "A_ub")
    b = as_vector(b_ub, "b_ub")
    c = as_vector(c, "c")
    m, n = A.shape
    if np.any(b < -tol.feas_eps):
        raise ValueError("solve_inequality_lp needs b_ub >= 0")
    b = np.maximum(b, 0.0)
    if max_iter is None:
        max_iter = 2000 + 50 * (m + n)

    T = np.zeros((m, n + m + 1))
    T[:, :n] = A
    T[:, n:n + m] = np.eye(m)
    T[:, -1] = b
    basis = list(range(n, n + m))
    cost = np.concatenate([c, np.zeros(m + 1)])
    allowed = np.ones(n + m, dtype=bool)
    value = _run(T, basis, cost, allowed, tol, max_iter)

    x = np.zeros(n)
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = max(T[i, -1], 0.0)
    return x, value


def feasible_nonneg_solution(A, b, tol: Tolerances = DEFAULT_TOL):
    """Phase-1 feasibility for {A@x = b, x >= 0}: (True, x) or (False, None)."""
    try:
        x, _ = solve_standard_lp(np.zeros(as_matrix(A, "A").shape[1]), A, b, tol)
    except Infeasible:
        return False, None
    return True, x
