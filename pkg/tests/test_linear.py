"""Logistic regression: gradient exactness, optimizer quality, API behavior."""

import numpy as np
import pytest
import scipy.optimize

from fraudbench.linear import LogisticClassifier, loss_and_grad

from _synth import make_classification, rng_for


def numeric_grad(theta, X, y, C, eps=1e-6):
    g = np.empty_like(theta)
    for j in range(theta.size):
        hi = theta.copy(); hi[j] += eps
        lo = theta.copy(); lo[j] -= eps
        g[j] = (loss_and_grad(hi, X, y, C)[0] - loss_and_grad(lo, X, y, C)[0])
        g[j] /= 2 * eps
    return g


def test_gradient_matches_finite_differences():
    for seed in range(5):
        X, y = make_classification(60, 4, prevalence=0.35, seed=seed)
        rng = rng_for(1000 + seed)
        theta = rng.normal(scale=0.5, size=5)
        C = float(rng.uniform(0.1, 5.0))
        _, g = loss_and_grad(theta, X, y.astype(np.float64), C)
        gn = numeric_grad(theta, X, y.astype(np.float64), C)
        denom = max(1.0, float(np.abs(gn).max()))
        assert np.abs(g - gn).max() / denom < 1e-5, f"seed {seed}"


def test_loss_is_positive_and_zero_weight_baseline():
    X, y = make_classification(40, 3, seed=7)
    theta0 = np.zeros(4)
    f0, _ = loss_and_grad(theta0, X, y.astype(np.float64), 1.0)
    # at theta = 0 each row contributes log 2
    assert f0 == pytest.approx(40 * np.log(2.0))


def test_matches_reference_optimizer_loss():
    for seed in (0, 1, 2):
        X, y = make_classification(150, 5, prevalence=0.3, seed=seed)
        yf = y.astype(np.float64)
        C = 2.0
        clf = LogisticClassifier(C=C, max_iter=500, tol=1e-9).fit(X, y)
        ours = loss_and_grad(
            np.r_[clf.coef_, clf.intercept_], X, yf, C
        )[0]
        ref = scipy.optimize.minimize(
            loss_and_grad, np.zeros(6), args=(X, yf, C),
            jac=True, method="L-BFGS-B",
            options={"maxiter": 2000, "ftol": 1e-14, "gtol": 1e-10},
        )
        assert ours <= ref.fun * (1 + 1e-6) + 1e-8, f"seed {seed}"


def test_converged_flag_and_iteration_cap():
    X, y = make_classification(80, 3, seed=11)
    capped = LogisticClassifier(max_iter=1, tol=1e-12).fit(X, y)
    assert capped.n_iter_ == 1 and not capped.converged_
    free = LogisticClassifier(max_iter=1000, tol=1e-6).fit(X, y)
    assert free.converged_ and free.n_iter_ < 1000


def test_separable_data_is_fit_perfectly():
    rng = rng_for(12)
    X = rng.normal(size=(100, 2))
    z = X[:, 0] + 2 * X[:, 1]
    X = X[np.abs(z - 0.3) > 0.25]  # genuine margin around the boundary
    y = (z[np.abs(z - 0.3) > 0.25] > 0.3).astype(np.int64)
    clf = LogisticClassifier(C=10.0, max_iter=500).fit(X, y)
    assert np.array_equal(clf.predict(X), y)
    p = clf.predict_proba(X)
    assert p.shape == y.shape and np.all((p >= 0) & (p <= 1))


def test_stronger_data_term_grows_weights():
    X, y = make_classification(200, 4, prevalence=0.4, seed=13)
    w_small = LogisticClassifier(C=0.01, max_iter=300).fit(X, y).coef_
    w_large = LogisticClassifier(C=100.0, max_iter=300).fit(X, y).coef_
    assert np.linalg.norm(w_large) > np.linalg.norm(w_small)


def test_predict_threshold_is_strict():
    clf = LogisticClassifier()
    clf.coef_ = np.array([0.0])
    clf.intercept_ = 0.0  # proba is exactly 0.5 everywhere
    X = np.array([[1.0], [2.0]])
    assert np.array_equal(clf.predict(X, threshold=0.5), [0, 0])


def test_unfit_model_raises():
    with pytest.raises(RuntimeError, match="fit"):
        LogisticClassifier().decision_function(np.zeros((2, 2)))


def test_fit_validates_shapes():
    with pytest.raises(ValueError):
        LogisticClassifier().fit(np.zeros((4, 2)), np.zeros(3))


def test_fit_is_deterministic():
    X, y = make_classification(90, 4, seed=14)
    a = LogisticClassifier(C=3.0).fit(X, y)
    b = LogisticClassifier(C=3.0).fit(X, y)
    assert np.array_equal(a.coef_, b.coef_)
    assert a.intercept_ == b.intercept_
