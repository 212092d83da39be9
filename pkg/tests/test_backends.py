"""Accelerated and plain kernels must agree to the last bit."""

import numpy as np
import pytest

from fraudbench import backend
from fraudbench.boost import BoostedTreesClassifier
from fraudbench.resample import resample
from fraudbench.tree import DecisionTreeClassifier, RandomForestClassifier

from _synth import make_classification, rng_for

needs_numba = pytest.mark.skipif(
    "numba" not in backend.available_backends(),
    reason="accelerated backend not importable here",
)


def run_on(name, fn):
    backend.use_backend(name)
    try:
        return fn()
    finally:
        backend.use_backend(None)


def assert_trees_identical(t1, t2):
    assert np.array_equal(t1.feature, t2.feature)
    assert np.array_equal(t1.threshold, t2.threshold)
    assert np.array_equal(t1.left, t2.left)
    assert np.array_equal(t1.right, t2.right)
    assert np.array_equal(t1.value, t2.value)


def tie_heavy_fixture(seed, n=220, m=6):
    # integer columns, a binary column, and a constant column stress every
    # tie rule in the scan
    X, y = make_classification(n, m, prevalence=0.3, seed=seed, quantize=3)
    X[:, m - 1] = (X[:, m - 1] > 0).astype(np.float64)
    X[:, m - 2] = 1.5
    return X, y


def test_backend_selection_api():
    names = backend.available_backends()
    assert "numpy" in names
    backend.use_backend("numpy")
    assert backend.current_backend_name() == "numpy"
    with pytest.raises(ValueError, match="backend"):
        backend.use_backend("bogus")


@needs_numba
def test_decision_tree_bitwise_equal():
    X, y = tie_heavy_fixture(0)
    fit = lambda: DecisionTreeClassifier(max_depth=8).fit(X, y).tree_
    t_nb = run_on("numba", fit)
    t_np = run_on("numpy", fit)
    assert_trees_identical(t_nb, t_np)
    X2, _ = tie_heavy_fixture(1)
    p_nb = run_on("numba", lambda: t_nb.predict_values(X2))
    p_np = run_on("numpy", lambda: t_nb.predict_values(X2))
    assert np.array_equal(p_nb, p_np)


@needs_numba
def test_random_forest_bitwise_equal():
    X, y = tie_heavy_fixture(2, n=180)
    fit = lambda: RandomForestClassifier(
        n_estimators=10, max_depth=7, seed=4
    ).fit(X, y)
    f_nb = run_on("numba", fit)
    f_np = run_on("numpy", fit)
    for ta, tb in zip(f_nb.trees_, f_np.trees_):
        assert_trees_identical(ta, tb)
    assert f_nb.oob_score_ == f_np.oob_score_


@needs_numba
def test_boosting_bitwise_equal():
    X, y = tie_heavy_fixture(3, n=200)
    fit = lambda: BoostedTreesClassifier(
        n_estimators=12,
        max_depth=4,
        learning_rate=0.3,
        gamma=0.1,
        colsample_bytree=0.8,
        scale_pos_weight=2.0,
        seed=6,
    ).fit(X, y)
    b_nb = run_on("numba", fit)
    b_np = run_on("numpy", fit)
    assert np.array_equal(b_nb.train_loss_, b_np.train_loss_)
    for ta, tb in zip(b_nb.trees_, b_np.trees_):
        assert_trees_identical(ta, tb)
    Xq, _ = tie_heavy_fixture(4, n=90)
    m_nb = run_on("numba", lambda: b_nb.predict_margin(Xq))
    m_np = run_on("numpy", lambda: b_np.predict_margin(Xq))
    assert np.array_equal(m_nb, m_np)


@needs_numba
def test_knn_bitwise_equal_across_sizes():
    from fraudbench.resample import nearest_neighbors

    for n, k, seed in ((80, 5, 5), (700, 3, 6)):  # brute and bucketed paths
        rng = rng_for(seed)
        X = np.round(rng.normal(size=(n, 4)), 1)  # duplicates guaranteed
        nn_nb = run_on("numba", lambda: nearest_neighbors(X, k))
        nn_np = run_on("numpy", lambda: nearest_neighbors(X, k))
        assert np.array_equal(nn_nb, nn_np), (n, k)


@needs_numba
def test_resampling_bitwise_equal():
    X, y = tie_heavy_fixture(7, n=160)
    for method in ("rus", "smote", "smoteenn"):
        a = run_on("numba", lambda: resample(method, X, y, seed=8))
        b = run_on("numpy", lambda: resample(method, X, y, seed=8))
        assert np.array_equal(a.X, b.X), method
        assert np.array_equal(a.y, b.y), method
        assert np.array_equal(a.source_row, b.source_row), method
