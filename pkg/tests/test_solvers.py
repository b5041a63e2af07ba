"""Coordinate-descent solvers, the exact-fit LP, the power-loss oracle, CV."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from persist_reduce import (Infeasible, InvalidSpec, Rng, constrained_gauge,
                            kfold_cv, lasso_path, lasso_symmetrized,
                            lqq_support_oracle, nn_lasso_cd, normalize_columns)

R2 = np.sqrt(2) / 2
X_UNIT = np.array([[1.0, 0.0, R2], [0.0, 1.0, R2]])
Y_UNIT = np.array([0.6, 0.8])


def test_single_column_closed_form():
    # min (b-1)^2 + b over b >= 0 has optimum b = 1/2, objective 3/4
    res = nn_lasso_cd(np.array([[1.0]]), np.array([1.0]), 1.0)
    assert res.beta[0] == pytest.approx(0.5, abs=1e-10)
    assert res.objective == pytest.approx(0.75, abs=1e-10)
    assert res.support == (0,)
    assert res.converged and res.kkt_ok


def test_large_penalty_kills_everything():
    res = nn_lasso_cd(np.array([[1.0]]), np.array([1.0]), 2.5)
    assert res.beta[0] == 0.0
    assert res.support == ()
    assert res.objective == pytest.approx(1.0)


def test_unit_instance_support_within_kept():
    res = nn_lasso_cd(X_UNIT, Y_UNIT, 0.01)
    assert set(res.support) <= {1, 2}
    assert res.kkt_ok


def test_restrict_pins_excluded_coordinates():
    full = nn_lasso_cd(X_UNIT, Y_UNIT, 0.01)
    red = nn_lasso_cd(X_UNIT, Y_UNIT, 0.01, restrict=[1, 2])
    assert red.beta[0] == 0.0
    assert red.objective == pytest.approx(full.objective, abs=1e-8)
    np.testing.assert_allclose(red.beta, full.beta, atol=1e-6)


def test_restrict_validation():
    with pytest.raises(ValueError):
        nn_lasso_cd(X_UNIT, Y_UNIT, 0.01, restrict=[0, 3])
    with pytest.raises(InvalidSpec):
        nn_lasso_cd(np.array([[0.0, 1.0], [0.0, 0.0]]),
                    Y_UNIT, 0.1)  # zero column updated
    with pytest.raises(InvalidSpec):
        nn_lasso_cd(X_UNIT, Y_UNIT, -0.5)
    with pytest.raises(ValueError):
        nn_lasso_cd(X_UNIT, np.ones(3), 0.1)


def test_nonconvergence_reported_not_raised():
    rng = np.random.default_rng(3)
    X = normalize_columns(rng.normal(size=(20, 40)))
    y = rng.normal(size=20)
    res = nn_lasso_cd(X, y, 1e-8, max_sweeps=2)
    assert not res.converged
    assert res.sweeps == 2
    # the objective is still the true value at the returned beta
    r = y - X @ res.beta
    assert res.objective == pytest.approx(float(r @ r + 1e-8 * res.beta.sum()))


def test_symmetrized_recovers_signs():
    X = np.eye(2)
    y = np.array([3.0, -2.0])
    res = lasso_symmetrized(X, y, 1.0)
    # soft-threshold at eta/2: 3 - 1/2 = 2.5 and -(2 - 1/2) = -1.5
    np.testing.assert_allclose(res.beta, [2.5, -1.5], atol=1e-8)
    assert res.support == (0, 1)
    assert res.objective == pytest.approx(0.25 + 0.25 + 1.0 * 4.0, abs=1e-8)


def test_symmetrized_zero_when_penalty_large():
    res = lasso_symmetrized(X_UNIT, Y_UNIT, 100.0)
    np.testing.assert_array_equal(res.beta, np.zeros(3))


def test_constrained_gauge_frozen_example():
    X = np.array([[1.0, 0.0, 0.6], [0.0, 1.0, 0.8]])
    res = constrained_gauge(X, np.array([2.0, 1.0]))
    assert res.objective == pytest.approx(2.5, abs=1e-10)
    assert res.support == (0, 2)
    np.testing.assert_allclose(res.beta, [1.25, 0.0, 1.25], atol=1e-10)
    np.testing.assert_allclose(X @ res.beta, [2.0, 1.0], atol=1e-10)


def test_constrained_gauge_infeasible_outside_cone():
    with pytest.raises(Infeasible):
        constrained_gauge(np.array([[1.0], [0.0]]), np.array([0.0, 1.0]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_cd_matches_constrained_limit(seed):
    """As eta -> 0 with y inside the cone, the CD fit approaches exact."""
    rng = np.random.default_rng(seed)
    n, p = int(rng.integers(2, 5)), int(rng.integers(3, 8))
    X = normalize_columns(rng.normal(size=(n, p)))
    w = rng.uniform(0.0, 1.0, size=p)
    y = X @ w  # inside the cone by construction
    res = nn_lasso_cd(X, y, 1e-10)
    assert res.kkt_ok
    assert np.linalg.norm(y - X @ res.beta) < 1e-4


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_kkt_certificate_random(seed):
    """Every exit satisfies beta >= 0 and an honest objective; converged
    exits additionally satisfy stationarity. Tiny eta on p >> n designs can
    legitimately exhaust the sweep cap, so eta stays >= 0.01 here (the
    non-convergence path has its own test)."""
    rng = np.random.default_rng(seed)
    n, p = int(rng.integers(2, 7)), int(rng.integers(1, 10))
    X = normalize_columns(rng.normal(size=(n, p)))
    y = rng.normal(size=n)
    eta = float(rng.uniform(0.01, 2.0))
    res = nn_lasso_cd(X, y, eta)
    assert np.all(res.beta >= 0.0)
    r = y - X @ res.beta
    assert res.objective == pytest.approx(float(r @ r + eta * res.beta.sum()))
    assert res.converged and res.kkt_ok
    # independent stationarity audit at a looser tolerance
    grad = -2.0 * X.T @ r + eta
    assert np.all(grad >= -1e-5)
    assert np.all(np.abs(grad[res.beta > 1e-8]) <= 1e-5)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_oracle_agrees_with_cd_at_q2(seed):
    rng = np.random.default_rng(seed)
    n, p = int(rng.integers(2, 5)), int(rng.integers(2, 6))
    X = normalize_columns(rng.normal(size=(n, p)))
    y = rng.normal(size=n)
    eta = float(rng.uniform(0.05, 1.0))
    cd = nn_lasso_cd(X, y, eta)
    oracle = lqq_support_oracle(X, y, eta, 2.0)
    assert oracle.objective == pytest.approx(cd.objective, abs=1e-5)
    np.testing.assert_allclose(oracle.beta, cd.beta, atol=1e-4)


def test_oracle_guards():
    with pytest.raises(ValueError):
        lqq_support_oracle(np.ones((2, 11)), np.ones(2), 0.1, 2.0)
    with pytest.raises(InvalidSpec):
        lqq_support_oracle(np.ones((2, 2)), np.ones(2), 0.1, 1.5)


def test_oracle_q4_beats_zero_only_when_worth_it():
    X = np.array([[1.0], [0.0]])
    # strong signal: keeping the coordinate wins
    res = lqq_support_oracle(X, np.array([2.0, 0.0]), 0.5, 4.0)
    assert res.support == (0,)
    # huge penalty: zero wins
    res0 = lqq_support_oracle(X, np.array([2.0, 0.0]), 50.0, 4.0)
    assert res0.support == ()
    assert res0.objective == pytest.approx(16.0)


def test_lasso_path_shapes_and_monotone_entry():
    rng = np.random.default_rng(11)
    X = normalize_columns(rng.normal(size=(12, 5)))
    beta_true = np.array([1.5, 0.0, -2.0, 0.0, 0.0])
    y = X @ beta_true + 0.01 * rng.normal(size=12)
    eta_max = 2.0 * np.abs(X.T @ y).max()
    etas = eta_max * np.power(10.0, np.linspace(0.0, -3.0, 30))
    path = lasso_path(X, y, etas)
    assert path.shape == (30, 5)
    np.testing.assert_array_equal(path[0], np.zeros(5))  # at eta_max all zero
    # the path end matches a cold solve at the same eta
    cold = lasso_symmetrized(X, y, float(etas[-1]))
    np.testing.assert_allclose(path[-1], cold.beta, atol=1e-6)


def test_kfold_cv_structure():
    rng_data = np.random.default_rng(5)
    X = normalize_columns(rng_data.normal(size=(24, 6)))
    y = X[:, 0] * 2.0 - X[:, 3] + 0.05 * rng_data.normal(size=24)
    res = kfold_cv(X, y, folds=4, n_eta=25, rng=Rng(123))
    assert res.eta_grid.shape == (25,) and res.cv_mse.shape == (25,)
    assert res.fold_mse.shape == (4, 25)
    assert np.all(np.diff(res.eta_grid) < 0)  # strictly descending
    assert res.eta_grid[0] == pytest.approx(2.0 * np.abs(X.T @ y).max())
    assert res.eta_grid[-1] == pytest.approx(res.eta_grid[0] * 1e-3)
    assert res.eta_1se >= res.eta_cv  # 1-SE picks the sparser end
    assert res.eta_cv in res.eta_grid and res.eta_1se in res.eta_grid
    k = int(np.argmin(res.cv_mse))
    assert res.eta_cv == res.eta_grid[k]


def test_kfold_cv_deterministic_in_rng():
    rng_data = np.random.default_rng(6)
    X = normalize_columns(rng_data.normal(size=(18, 4)))
    y = rng_data.normal(size=18)
    a = kfold_cv(X, y, 3, 10, Rng(7))
    b = kfold_cv(X, y, 3, 10, Rng(7))
    np.testing.assert_array_equal(a.fold_mse, b.fold_mse)
    c = kfold_cv(X, y, 3, 10, Rng(8))
    assert not np.array_equal(a.fold_mse, c.fold_mse)


def test_kfold_cv_validation():
    X = np.eye(3)
    y = np.ones(3)
    with pytest.raises(ValueError):
        kfold_cv(X, y, folds=1, n_eta=5, rng=Rng(0))
    with pytest.raises(ValueError):
        kfold_cv(X, y, folds=4, n_eta=5, rng=Rng(0))
    with pytest.raises(ValueError):
        kfold_cv(X, y, folds=2, n_eta=1, rng=Rng(0))
    with pytest.raises(InvalidSpec):
        kfold_cv(X, np.zeros(3), folds=3, n_eta=5, rng=Rng(0))


def test_solve_result_json_one_based():
    res = nn_lasso_cd(X_UNIT, Y_UNIT, 0.01)
    doc = res.to_json_dict()
    assert doc["support"] == [i + 1 for i in res.support]
    assert isinstance(doc["beta"][0], float)
