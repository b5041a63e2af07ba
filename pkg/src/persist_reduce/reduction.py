"""Support screening for polyhedral-gauge-regularized loss minimization.

Given a design X with unit columns, a reference point y and a scale alpha,
the screening certificate is geometric: every coefficient that can be
nonzero in some optimum corresponds to an extreme ray of the shifted cone
pos{x_i - alpha y}. Each supported loss contributes a closed-form upper
bound on the penalty weight eta below which the certificate applies:

  least squares       eta < 2 alpha ||y||^2 - 2 max_i <y, x_i>
  unit-sphere form    eta < 2 ||y||   - 2 max_i <y, x_i>   (alpha = 1/||y||)
  Mahalanobis         eta < 2 alpha b' A^-1 b - 2 max_i <b, x_i>
  q-power             eta < ||y||_q^(q-2) (alpha (2q-2) ||y||_q^2
                                           - q (2q-3) max_i <y, x_i>)
  Bregman q-power     eta < q (q-1) ||y||_q^(q-2) (alpha ||y||_q^2
                                                   - max_i <y, x_i>)

The general evaluator turns a linear minorant h of the shifted loss plus a
conjugate value into the admissible half-open eta interval; the optimized
least-squares search maximizes the shifted bound over the shift point v.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .cones import RaySet, find_base
from .errors import (DegenerateRay, InvalidGamma, InvalidSpec, NotNormalized,
                     SingularA)
from .geometry import vertex_noncover_check
from .numerics import DEFAULT_TOL, Rng, Tolerances, as_matrix, as_vector
from .rays import ExtremeRaySet, extreme_rays

_KINDS = ("ls", "mahalanobis", "lqq", "bregman")


def polar_gauge_orthant(theta) -> float:
    """Polar gauge of the nonnegative-orthant simplex gauge: max(0, max_i theta_i)."""
    theta = as_vector(theta, "theta")
    return float(max(0.0, theta.max())) if theta.size else 0.0


def _check_unit_columns(X, tol: Tolerances):
    norms = np.linalg.norm(X, axis=0)
    bad = np.flatnonzero(np.abs(norms - 1.0) > tol.support_eps)
    if bad.size:
        raise NotNormalized(int(bad[0]))


@dataclass(frozen=True)
class LossSpec:
    """Loss family selector plus the parameters the eta bounds need.

    kind    one of "ls", "mahalanobis", "lqq", "bregman"
    alpha   cone scale (> 0); the shifted generators are x_i - alpha*y
    q       exponent for the power families (> 1)
    A, b, c Mahalanobis quadratic u'Au - 2u'b + c (A symmetric PD, b != 0)
    gamma   shift parameter in [0, 1]; defaults to the loss-optimal value
    psi_L / psi_H   affine floor/ceiling constants for the general evaluator
    drop_lower      drop the minorant-side inequality (valid for convex
                    losses with the subgradient-at-zero minorant family)
    """

    kind: str
    alpha: float = 1.0
    q: float = 2.0
    A: np.ndarray | None = None
    b: np.ndarray | None = None
    c: float = 0.0
    gamma: float | None = None
    psi_L: float = 0.0
    psi_H: float | None = None
    drop_lower: bool = True

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidSpec(f"unknown loss kind {self.kind!r}")
        if not self.alpha > 0.0:
            raise InvalidSpec("alpha must be positive")
        if self.kind in ("lqq", "bregman") and not self.q > 1.0:
            raise InvalidSpec("power losses need q > 1")
        if self.gamma is not None and not 0.0 <= self.gamma <= 1.0:
            raise InvalidGamma(f"gamma={self.gamma} outside [0, 1]")
        if self.kind == "mahalanobis":
            if self.A is None or self.b is None:
                raise InvalidSpec("mahalanobis needs A and b")
            A = as_matrix(self.A, "A")
            b = as_vector(self.b, "b")
            if A.shape[0] != A.shape[1] or A.shape[0] != b.shape[0]:
                raise InvalidSpec("A/b shape mismatch")
            if not np.allclose(A, A.T, atol=1e-10):
                raise InvalidSpec("A must be symmetric")
            if np.linalg.norm(b) <= DEFAULT_TOL.feas_eps:
                raise InvalidSpec("mahalanobis needs b != 0")
            A.flags.writeable = False
            b.flags.writeable = False
            object.__setattr__(self, "A", A)
            object.__setattr__(self, "b", b)

    def gamma_value(self) -> float:
        if self.gamma is not None:
            return self.gamma
        if self.kind in ("ls", "mahalanobis"):
            return 0.5
        if self.kind == "lqq":
            return 1.0 / (2.0 * self.q - 2.0)
        return 1.0 / self.q  # bregman

    def reference_point(self, y=None) -> np.ndarray:
        """The cone shift target: y itself, or A^-1 b for Mahalanobis."""
        if self.kind == "mahalanobis":
            try:
                return np.linalg.solve(self.A, self.b)
            except np.linalg.LinAlgError as e:
                raise SingularA(str(e)) from e
        if y is None:
            raise InvalidSpec(f"{self.kind} loss needs an explicit y")
        return as_vector(y, "y")


def shifted_rays(X, y, alpha: float, tol: Tolerances = DEFAULT_TOL) -> RaySet:
    """RaySet of the generators x_i - alpha*y with a valid base direction.

    -y is a base whenever alpha ||y||^2 > max_i <y, x_i> (strictly); when
    that shortcut fails, a base is found by LP, or NotPointed is raised.
    Collapsed generators raise DegenerateRay with the 0-based column index.
    """
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    if not alpha > 0.0:
        raise InvalidSpec("alpha must be positive")
    rows = X.T - alpha * y
    norms = np.linalg.norm(rows, axis=1)
    bad = np.flatnonzero(norms <= tol.feas_eps)
    if bad.size:
        raise DegenerateRay(int(bad[0]))
    if alpha * float(y @ y) > float((X.T @ y).max()) + tol.feas_eps:
        return RaySet(rows, -y)
    return RaySet(rows, find_base(rows, tol))


def eta_max_unit_sphere(X, y, tol: Tolerances = DEFAULT_TOL) -> float:
    """Bound for unit columns with the sphere scaling alpha = 1/||y||_2:
    2 ||y||_2 - 2 max_i <y, x_i>."""
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    _check_unit_columns(X, tol)
    return float(2.0 * np.linalg.norm(y) - 2.0 * (X.T @ y).max())


def eta_max_least_squares(X, y, alpha: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Least-squares bound 2 alpha ||y||^2 - 2 max_i <y, x_i> (unit columns)."""
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    _check_unit_columns(X, tol)
    if not alpha > 0.0:
        raise InvalidSpec("alpha must be positive")
    return float(2.0 * alpha * (y @ y) - 2.0 * (X.T @ y).max())


def eta_max_mahalanobis(X, A, b, alpha: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Mahalanobis bound 2 alpha b'A^-1 b - 2 max_i <b, x_i>."""
    spec = LossSpec("mahalanobis", alpha=alpha, A=A, b=b)
    X = as_matrix(X, "X")
    y_ref = spec.reference_point()
    return float(2.0 * alpha * (spec.b @ y_ref) - 2.0 * (X.T @ spec.b).max())


def eta_max_lqq(X, y, alpha: float, q: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """q-power loss bound; reduces to the least-squares bound at q = 2."""
    if not q > 1.0:
        raise InvalidSpec("q must exceed 1")
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    _check_unit_columns(X, tol)
    nq = float(np.sum(np.abs(y) ** q) ** (1.0 / q))
    corr = float((X.T @ y).max())
    return nq ** (q - 2.0) * (alpha * (2.0 * q - 2.0) * nq ** 2 - q * (2.0 * q - 3.0) * corr)


def eta_max_bregman(X, y, alpha: float, q: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Bregman q-power bound; reduces to the least-squares bound at q = 2."""
    if not q > 1.0:
        raise InvalidSpec("q must exceed 1")
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    _check_unit_columns(X, tol)
    nq = float(np.sum(np.abs(y) ** q) ** (1.0 / q))
    corr = float((X.T @ y).max())
    return q * (q - 1.0) * nq ** (q - 2.0) * (alpha * nq ** 2 - corr)


def eta_zero_threshold_ls(X, y) -> float:
    """Penalty weight above which beta = 0 is the unique optimum for the
    least-squares loss: the polar gauge of 2 X'y, i.e. max(0, 2 max_i <x_i, y>)."""
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    return polar_gauge_orthant(2.0 * (X.T @ y))


def _zero_threshold(X, y, spec: LossSpec) -> float:
    """Polar gauge of -X' grad f(0) for the loss at hand (formal for Bregman)."""
    X = as_matrix(X, "X")
    if spec.kind == "ls":
        return eta_zero_threshold_ls(X, y)
    if spec.kind == "mahalanobis":
        return polar_gauge_orthant(2.0 * (X.T @ spec.b))
    y = as_vector(y, "y")
    q = spec.q
    if spec.kind == "lqq":
        g0 = q * np.sign(y) * np.abs(y) ** (q - 1.0)
    else:
        g0 = q * y ** (q - 1.0)
    return polar_gauge_orthant(X.T @ g0)


@dataclass(frozen=True)
class EtaInterval:
    """Half-open admissible interval [lower, upper) for the penalty weight."""

    lower: float
    upper: float
    valid: bool = field(default=False)

    @staticmethod
    def make(lower: float, upper: float) -> "EtaInterval":
        return EtaInterval(lower, upper, bool(lower < upper))

    def admits(self, eta: float) -> bool:
        return self.valid and self.lower <= eta < self.upper


def eta_interval_general(X, h, conj_value: float, spec: LossSpec,
                         tol: Tolerances = DEFAULT_TOL) -> EtaInterval:
    """Admissible eta interval from a linear minorant <h, .> of the shifted
    loss with conjugate value conj_value at h.

    Solves, for eta, the pair
        (1 - gamma) eta <= -min_i <x_i, h>
        -min_i <x_i, h> <  alpha (-conj_value - psi_L) - gamma eta
    as a half-open interval [0, upper). With drop_lower (the default, valid
    for convex losses whose minorant family is (1-gamma) times the
    subgradient at zero) the first inequality is skipped; gamma = 0 makes
    the second eta-free (empty or unbounded), gamma = 1 the first vacuous
    provided -min_i <x_i, h> is nonnegative.
    """
    X = as_matrix(X, "X")
    h = as_vector(h, "h")
    gamma = spec.gamma_value()
    m = float(-(X.T @ h).min())
    uppers = []
    if not spec.drop_lower:
        if gamma < 1.0:
            uppers.append(m / (1.0 - gamma))
        elif m < -tol.lp_eps:
            return EtaInterval.make(0.0, 0.0)
    rhs = spec.alpha * (-conj_value - spec.psi_L)
    if gamma > 0.0:
        uppers.append((rhs - m) / gamma)
    elif m >= rhs:
        return EtaInterval.make(0.0, 0.0)
    upper = min(uppers) if uppers else np.inf
    return EtaInterval.make(0.0, float(upper))


def _ls_bound_objective(X, y, v) -> float:
    """Shifted least-squares bound value at shift point v (unit alpha)."""
    rho = polar_gauge_orthant(2.0 * (X.T @ (y - v)))
    yy = float(y @ y)
    vv = float(v @ v)
    gap = yy - vv - rho
    if gap >= 0.0:
        return rho
    return yy - (np.sqrt(vv) + np.sqrt(rho + vv - yy)) ** 2


def eta_ls_optimized(X, y, n_starts: int = 200, step_tol: float = 1e-8,
                     seed: int = 0, tol: Tolerances = DEFAULT_TOL):
    """Easy and shift-optimized least-squares eta bounds (unit alpha).

    Returns (eta_easy, eta_best, v_best) where
      eta_easy = min{ r(2X'y), 2||y||^2 - r(2X'y) }   (r = orthant polar)
      eta_best = max over shift points v of the two-case bound value.

    n = 1 is solved exactly on a dense grid plus local refinement; higher
    dimensions run a deterministic multi-start coordinate search (v = 0 is
    always a start, so eta_best >= eta_easy).
    """
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    n = y.shape[0]
    rho0 = polar_gauge_orthant(2.0 * (X.T @ y))
    eta_easy = float(min(rho0, 2.0 * (y @ y) - rho0))

    if n == 1:
        span = max(1.0, abs(float(y[0])), float(np.abs(X).max()))
        grid = np.linspace(-3.0 * span, 3.0 * span, 240001)
        yv = y[0] - grid
        xmax, xmin = float(X.max()), float(X.min())
        rho = np.maximum(0.0, 2.0 * np.maximum(xmax * yv, xmin * yv))
        yy = float(y @ y)
        vv = grid * grid
        gap = yy - vv - rho
        arg = np.maximum(rho + vv - yy, 0.0)
        vals = np.where(gap >= 0.0, rho, yy - (np.abs(grid) + np.sqrt(arg)) ** 2)
        k = int(np.argmax(vals))
        a = grid[max(k - 1, 0)]
        b = grid[min(k + 1, grid.size - 1)]
        f = lambda v: _ls_bound_objective(X, y, np.array([v]))
        for _ in range(200):
            m1 = a + (b - a) / 3.0
            m2 = b - (b - a) / 3.0
            if f(m1) < f(m2):
                a = m1
            else:
                b = m2
        v_best = np.array([(a + b) / 2.0])
        eta_best = f(v_best[0])
        if eta_best < eta_easy:
            eta_best, v_best = eta_easy, np.zeros(1)
        return eta_easy, float(eta_best), v_best

    gen = Rng(seed, 0).generator()
    scale = max(1.0, float(np.linalg.norm(y)))
    starts = [np.zeros(n)]
    starts += [scale * gen.standard_normal(n) for _ in range(max(0, n_starts - 1))]
    best_val, best_v = -np.inf, np.zeros(n)
    for v0 in starts:
        v = v0.copy()
        val = _ls_bound_objective(X, y, v)
        step = 0.25 * scale
        while step >= step_tol:
            improved = False
            for axis in range(n):
                for sgn in (1.0, -1.0):
                    cand = v.copy()
                    cand[axis] += sgn * step
                    cv = _ls_bound_objective(X, y, cand)
                    if cv > val + 1e-15:
                        v, val, improved = cand, cv, True
            if not improved:
                step *= 0.5
        if val > best_val:
            best_val, best_v = val, v
    if best_val < eta_easy:
        best_val, best_v = eta_easy, np.zeros(n)
    return eta_easy, float(best_val), best_v


@dataclass(frozen=True)
class ReductionReport:
    """Outcome of a screening run. kept indexes columns 0-based internally;
    serialization is 1-based. valid=False never hides the geometry: kept is
    still the extreme-ray superset computed from the shifted cone."""

    kept: tuple[int, ...]
    eta: float
    interval: EtaInterval
    noncover_ok: bool
    alpha: float
    valid: bool
    reasons: tuple[str, ...]
    zero_solution: bool
    n_classes: int
    membership_calls: int
    lp_calls: int
    wall_time_ms: float

    def to_json_dict(self) -> dict:
        return {
            "kept": [i + 1 for i in self.kept],
            "eta": self.eta,
            "interval": {"lower": self.interval.lower,
                         "upper": self.interval.upper,
                         "valid": self.interval.valid},
            "noncover_ok": self.noncover_ok,
            "alpha": self.alpha,
            "valid": self.valid,
            "reasons": list(self.reasons),
            "zero_solution": self.zero_solution,
            "n_classes": self.n_classes,
            "membership_calls": self.membership_calls,
            "lp_calls": self.lp_calls,
            "wall_time_ms": self.wall_time_ms,
        }


def _eta_upper(X, y, spec: LossSpec, tol: Tolerances) -> float:
    if spec.kind == "ls":
        return eta_max_least_squares(X, y, spec.alpha, tol)
    if spec.kind == "mahalanobis":
        return eta_max_mahalanobis(X, spec.A, spec.b, spec.alpha, tol)
    if spec.kind == "lqq":
        return eta_max_lqq(X, y, spec.alpha, spec.q, tol)
    return eta_max_bregman(X, y, spec.alpha, spec.q, tol)


def persistent_reduce(X, y, spec: LossSpec, eta: float,
                      tol: Tolerances = DEFAULT_TOL) -> ReductionReport:
    """Screen columns of X: the returned kept set is a superset of the
    support of every optimum of the chosen loss plus eta times the
    nonnegative-orthant gauge, provided the report says valid.

    The report never raises on a disqualified eta or a failed non-cover
    check; it flags them (valid=False with reasons) and still carries the
    extreme-ray geometry. Genuinely degenerate inputs (collapsed rays, a
    line in the cone) do raise.
    """
    t0 = time.perf_counter()
    X = as_matrix(X, "X")
    if not eta > 0.0:
        raise InvalidSpec("eta must be positive")
    y_ref = spec.reference_point(y)
    upper = _eta_upper(X, y_ref, spec, tol)
    interval = EtaInterval.make(0.0, upper)
    noncover = vertex_noncover_check(X, spec.alpha * y_ref, tol)

    rays = shifted_rays(X, y_ref, spec.alpha, tol)
    res: ExtremeRaySet = extreme_rays(rays, tol)

    reasons = []
    if not interval.admits(eta):
        reasons.append("eta-out-of-interval")
    if not noncover.ok:
        reasons.append("noncover-failed")
    zero = eta > _zero_threshold(X, y_ref, spec)
    ms = (time.perf_counter() - t0) * 1e3
    return ReductionReport(res.kept, float(eta), interval, noncover.ok,
                           float(spec.alpha), not reasons, tuple(reasons),
                           bool(zero), len(res.classes),
                           res.membership_calls, res.lp_calls, ms)
