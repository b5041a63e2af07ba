"""Reference solvers used to verify (and exercise) the screening results.

nn_lasso_cd minimizes  ||X b - y||^2 + eta * 1'b  over b >= 0 by cyclic
coordinate descent with exact coordinate minimizers; no 1/(2n) factor
anywhere, so penalty weights compare directly against the screening bounds.
The sweep kernel is JIT compiled when numba is importable and falls back to
the identical pure-Python loop otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec
from .numerics import (DEFAULT_TOL, Rng, Tolerances, as_matrix, as_vector,
                       symmetrize_design)
from .simplex import solve_standard_lp

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


CONV_TOL = 1e-10        # max coordinate change over a full sweep
MAX_SWEEPS = 100_000
KKT_TOL = 1e-6


@njit(cache=True)
def _cd_sweep(XT, sqn, r, beta, eta, idx):  # pragma: no cover - jitted
    n = r.shape[0]
    maxd = 0.0
    for t in range(idx.shape[0]):
        i = idx[t]
        xi = XT[i]
        dot = 0.0
        for k in range(n):
            dot += xi[k] * r[k]
        rho = dot + sqn[i] * beta[i]
        bn = (2.0 * rho - eta) / (2.0 * sqn[i])
        if bn < 0.0:
            bn = 0.0
        d = bn - beta[i]
        if d != 0.0:
            for k in range(n):
                r[k] -= xi[k] * d
            beta[i] = bn
            if d < 0.0:
                d = -d
            if d > maxd:
                maxd = d
    return maxd


@dataclass(frozen=True)
class SolveResult:
    beta: np.ndarray
    objective: float
    support: tuple[int, ...]
    sweeps: int
    converged: bool
    kkt_ok: bool

    def to_json_dict(self) -> dict:
        return {"beta": list(map(float, self.beta)),
                "objective": self.objective,
                "support": [i + 1 for i in self.support],
                "sweeps": self.sweeps,
                "converged": self.converged,
                "kkt_ok": self.kkt_ok}


def _kkt_nonneg(XT, r, beta, eta, idx, tol: Tolerances) -> bool:
    grad = -2.0 * (XT[idx] @ r) + eta
    on = beta[idx] > tol.support_eps
    return bool(np.all(np.abs(grad[on]) <= KKT_TOL)
                and np.all(grad[~on] >= -KKT_TOL))


def _cd_solve(XT, sqn, eta, idx, beta, r, max_sweeps, conv_tol):
    """Active-set accelerated cyclic CD. Exits only after a full sweep over
    idx moves every coordinate by less than conv_tol (or at the sweep cap).
    Returns (sweeps_used, converged). beta and r are updated in place."""
    sweeps = 0
    while sweeps < max_sweeps:
        d = _cd_sweep(XT, sqn, r, beta, eta, idx)
        sweeps += 1
        if d < conv_tol:
            return sweeps, True
        active = idx[beta[idx] > 0.0]
        while active.size and sweeps < max_sweeps:
            d = _cd_sweep(XT, sqn, r, beta, eta, active)
            sweeps += 1
            if d < conv_tol:
                break
    return sweeps, False


def nn_lasso_cd(X, y, eta: float, restrict=None, tol: Tolerances = DEFAULT_TOL,
                max_sweeps: int = MAX_SWEEPS, conv_tol: float = CONV_TOL) -> SolveResult:
    """Nonnegative gauge-penalized least squares by cyclic coordinate descent.

    Parameters
    ----------
    X : (n, p) design, columns nonzero (on the coordinates being updated).
    eta : penalty weight, >= 0.
    restrict : optional index set; coordinates outside stay pinned at zero.

    Result invariants: beta >= 0; objective equals its recomputation from
    beta; the KKT flag reports stationarity at tolerance 1e-6. Convergence
    means a full sweep moved no coordinate by conv_tol or more; hitting the
    sweep cap returns converged=False rather than raising.
    """
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    n, p = X.shape
    if y.shape[0] != n:
        raise ValueError("X and y shapes disagree")
    if eta < 0.0:
        raise InvalidSpec("eta must be nonnegative")
    XT = np.ascontiguousarray(X.T)
    sqn = np.einsum("ij,ij->i", XT, XT)
    idx = np.arange(p, dtype=np.int64) if restrict is None \
        else np.unique(np.asarray(restrict, dtype=np.int64))
    if idx.size and (idx[0] < 0 or idx[-1] >= p):
        raise ValueError("restrict indices out of range")
    if np.any(sqn[idx] <= tol.feas_eps ** 2):
        raise InvalidSpec("zero column among updated coordinates")

    beta = np.zeros(p)
    r = y.copy()
    sweeps, converged = _cd_solve(XT, sqn, eta, idx, beta, r,
                                  max_sweeps, conv_tol)
    r = y - XT.T @ beta  # exact residual, clears accumulated drift
    obj = float(r @ r + eta * beta.sum())
    support = tuple(int(i) for i in np.flatnonzero(beta > tol.support_eps))
    kkt = _kkt_nonneg(XT, r, beta, eta, idx, tol)
    return SolveResult(beta, obj, support, sweeps, converged, kkt)


def lasso_symmetrized(X, y, eta: float, tol: Tolerances = DEFAULT_TOL,
                      max_sweeps: int = MAX_SWEEPS,
                      conv_tol: float = CONV_TOL) -> SolveResult:
    """l1-penalized least squares with signed coefficients, solved as a
    nonnegative program on the sign-split design [-X  X].

    beta in the result is the signed vector (positive block minus negative
    block); the objective uses ||beta||_1, which matches the split program's
    value at any optimum.
    """
    X = as_matrix(X, "X")
    p = X.shape[1]
    res = nn_lasso_cd(symmetrize_design(X), y, eta, None, tol, max_sweeps, conv_tol)
    beta = res.beta[p:] - res.beta[:p]
    r = as_vector(y) - X @ beta
    obj = float(r @ r + eta * np.abs(beta).sum())
    support = tuple(int(i) for i in np.flatnonzero(np.abs(beta) > tol.support_eps))
    return SolveResult(beta, obj, support, res.sweeps, res.converged, res.kkt_ok)


def constrained_gauge(X, y, tol: Tolerances = DEFAULT_TOL) -> SolveResult:
    """Exact-fit gauge minimization min{1'b : X b = y, b >= 0} by simplex.

    Returns an optimal basic solution; raises Infeasible when y is outside
    the conic hull of the columns.
    """
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    beta, value = solve_standard_lp(np.ones(X.shape[1]), X, y, tol)
    support = tuple(int(i) for i in np.flatnonzero(beta > tol.support_eps))
    return SolveResult(beta, float(value), support, 0, True, True)


def _power_objective(Xs, y, b, eta, q):
    r = Xs @ b - y
    return float(np.sum(np.abs(r) ** q) + eta * b.sum())


def _pgd_nonneg_power(Xs, y, eta, q, iters=20000, step_tol=1e-12):
    """Projected gradient with backtracking for the smooth q-power loss
    (q >= 2) plus a linear term over the nonnegative orthant."""
    k = Xs.shape[1]
    b = np.zeros(k)
    obj = _power_objective(Xs, y, b, eta, q)
    t = 1.0
    for _ in range(iters):
        r = Xs @ b - y
        grad = q * (Xs.T @ (np.sign(r) * np.abs(r) ** (q - 1.0))) + eta
        t = min(t * 2.0, 1e8)
        while True:
            bn = np.maximum(b - t * grad, 0.0)
            d = bn - b
            cand = _power_objective(Xs, y, bn, eta, q)
            if cand <= obj + grad @ d + (d @ d) / (2.0 * t) + 1e-18:
                break
            t *= 0.5
            if t < 1e-18:
                bn, cand = b, obj
                break
        if np.max(np.abs(bn - b)) < step_tol:
            return bn, cand
        b, obj = bn, cand
    return b, obj


def lqq_support_oracle(X, y, eta: float, q: float,
                       tol: Tolerances = DEFAULT_TOL) -> SolveResult:
    """Global minimum of  sum_j |(X b - y)_j|^q + eta 1'b, b >= 0, by full
    support enumeration (ground-truth oracle; p <= 10).

    Every coordinate subset gets its own projected-gradient solve; the best
    objective wins and its strict-positive coordinates form the support.
    """
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    n, p = X.shape
    if p > 10:
        raise ValueError("support enumeration capped at p = 10")
    if not q >= 2.0:
        raise InvalidSpec("oracle needs q >= 2 (smooth case)")
    best_obj = float(np.sum(np.abs(y) ** q))
    best_beta = np.zeros(p)
    for mask in range(1, 1 << p):
        S = [i for i in range(p) if mask >> i & 1]
        bS, obj = _pgd_nonneg_power(X[:, S], y, eta, q)
        if obj < best_obj - 1e-15:
            best_obj = obj
            best_beta = np.zeros(p)
            best_beta[S] = bS
    support = tuple(int(i) for i in np.flatnonzero(best_beta > tol.support_eps))
    return SolveResult(best_beta, best_obj, support, 0, True, True)


def _nn_lasso_path(XT, sqn, y, etas, max_sweeps=MAX_SWEEPS, conv_tol=CONV_TOL):
    """Warm-started descending-eta path on a prepared (p, n) transposed
    design. Returns (betas (len(etas), p), total sweeps, all converged).

    Columns with zero norm (possible when a cross-validation fold drops the
    only rows a column touches) are pinned at zero: they cannot change the
    fit and zero is always among their optimal values."""
    p = XT.shape[0]
    idx = np.flatnonzero(sqn > 0.0).astype(np.int64)
    beta = np.zeros(p)
    r = y.copy()
    out = np.empty((len(etas), p))
    total = 0
    ok = True
    for j, eta in enumerate(etas):
        sweeps, conv = _cd_solve(XT, sqn, float(eta), idx, beta, r,
                                 max_sweeps, conv_tol)
        total += sweeps
        ok = ok and conv
        r = y - XT.T @ beta
        out[j] = beta
    return out, total, ok


def lasso_path(X, y, etas, tol: Tolerances = DEFAULT_TOL):
    """Signed coefficient path over a descending eta grid (warm starts).

    Returns an array of shape (len(etas), p) of signed coefficients.
    """
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    p = X.shape[1]
    XT = np.ascontiguousarray(symmetrize_design(X).T)
    sqn = np.einsum("ij,ij->i", XT, XT)
    betas, _, _ = _nn_lasso_path(XT, sqn, y, list(map(float, etas)))
    return betas[:, p:] - betas[:, :p]


@dataclass(frozen=True)
class CVResult:
    eta_grid: np.ndarray      # descending
    cv_mse: np.ndarray        # mean over folds, aligned with eta_grid
    fold_mse: np.ndarray      # (folds, n_eta)
    eta_cv: float
    eta_1se: float
    folds: int

    def to_json_dict(self) -> dict:
        return {"eta_grid": list(map(float, self.eta_grid)),
                "cv_mse": list(map(float, self.cv_mse)),
                "eta_cv": self.eta_cv,
                "eta_1se": self.eta_1se,
                "folds": self.folds}


def kfold_cv(X, y, folds: int, n_eta: int, rng: Rng,
             tol: Tolerances = DEFAULT_TOL) -> CVResult:
    """K-fold cross-validation of the symmetrized lasso over a log grid.

    The grid descends three decades from eta_max = 2 ||X'y||_inf (the
    smallest weight that zeroes the signed program). Folds come from one
    seeded permutation of the rows; each fold solves a warm-started path on
    its training rows and scores mean squared prediction error on the held
    out rows. eta_cv minimizes the mean curve; eta_1se is the largest eta
    within one standard error (across folds) of that minimum.
    """
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    n, p = X.shape
    if not 2 <= folds <= n:
        raise ValueError("folds must be in [2, n]")
    if n_eta < 2:
        raise ValueError("n_eta must be at least 2")
    eta_max = 2.0 * float(np.abs(symmetrize_design(X).T @ y).max())
    if eta_max <= 0.0:
        raise InvalidSpec("X'y vanishes; the cv grid would be degenerate")
    grid = eta_max * np.power(10.0, np.linspace(0.0, -3.0, n_eta))

    perm = rng.generator().permutation(n)
    fold_id = np.empty(n, dtype=np.int64)
    fold_id[perm] = np.arange(n) % folds

    fold_mse = np.empty((folds, n_eta))
    for f in range(folds):
        test = fold_id == f
        Xtr, ytr = X[~test], y[~test]
        Xte, yte = X[test], y[test]
        XT = np.ascontiguousarray(symmetrize_design(Xtr).T)
        sqn = np.einsum("ij,ij->i", XT, XT)
        betas, _, _ = _nn_lasso_path(XT, sqn, ytr, grid)
        signed = betas[:, p:] - betas[:, :p]
        pred = signed @ Xte.T
        err = pred - yte
        fold_mse[f] = np.einsum("ij,ij->i", err, err) / max(1, yte.shape[0])

    cv_mse = fold_mse.mean(axis=0)
    k = int(np.argmin(cv_mse))
    se = float(np.std(fold_mse[:, k], ddof=1) / np.sqrt(folds))
    within = np.flatnonzero(cv_mse <= cv_mse[k] + se)
    return CVResult(grid, cv_mse, fold_mse, float(grid[k]),
                    float(grid[int(within[0])]), folds)
