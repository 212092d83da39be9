"""Metric correctness against hand calculations and independent oracles."""

import numpy as np
import pytest

from fraudbench.metrics import (
    auc_roc,
    average_precision,
    confusion_at,
    pr_curve,
    roc_curve,
)

from _synth import make_labels, rng_for


def mann_whitney_auc(y, s):
    """Pairwise probability a positive outscores a negative, ties half."""
    pos = s[y == 1]
    neg = s[y == 0]
    wins = 0.0
    for p in pos:
        wins += np.count_nonzero(p > neg) + 0.5 * np.count_nonzero(p == neg)
    return wins / (pos.size * neg.size)


def ap_oracle(y, s):
    """Average precision by enumerating every distinct score cutoff."""
    thresholds = np.unique(s)[::-1]
    ap = 0.0
    prev_recall = 0.0
    n_pos = int(y.sum())
    for t in thresholds:
        pred = s >= t
        tp = int(np.count_nonzero(pred & (y == 1)))
        fp = int(np.count_nonzero(pred & (y == 0)))
        recall = tp / n_pos
        precision = tp / (tp + fp)
        ap += (recall - prev_recall) * precision
        prev_recall = recall
    return ap


def test_confusion_stats_hand_example():
    y = np.array([1, 1, 1, 0, 0])
    s = np.array([0.9, 0.6, 0.4, 0.7, 0.2])
    st = confusion_at(y, s, threshold=0.5)
    assert (st.tp, st.fp, st.fn, st.tn) == (2, 1, 1, 1)
    assert st.recall == pytest.approx(2 / 3)
    assert st.precision == pytest.approx(2 / 3)
    assert st.f1 == pytest.approx(2 / 3)
    assert st.fpr == pytest.approx(1 / 2)
    assert st.accuracy == pytest.approx(3 / 5)
    assert not st.degenerate


def test_scores_at_threshold_are_negative():
    y = np.array([1, 0])
    s = np.array([0.5, 0.5])
    st = confusion_at(y, s, threshold=0.5)
    assert st.tp == 0 and st.fn == 1 and st.tn == 1 and st.fp == 0


def test_zero_denominators_report_degenerate():
    y = np.array([0, 0, 1])
    s = np.array([0.1, 0.2, 0.3])
    st = confusion_at(y, s, threshold=0.9)  # nothing predicted positive
    assert st.precision == 0.0 and st.recall == 0.0 and st.f1 == 0.0
    assert st.degenerate


def test_roc_curve_hand_example():
    y = np.array([1, 0, 1, 0])
    s = np.array([0.8, 0.6, 0.4, 0.2])
    fpr, tpr, thr = roc_curve(y, s)
    assert np.isinf(thr[0]) and fpr[0] == 0.0 and tpr[0] == 0.0
    assert np.array_equal(fpr, [0.0, 0.0, 0.5, 0.5, 1.0])
    assert np.array_equal(tpr, [0.0, 0.5, 0.5, 1.0, 1.0])
    assert auc_roc(y, s) == pytest.approx(0.75)


def test_roc_all_tied_scores_is_chance():
    y = np.array([1, 0, 1, 0, 0])
    s = np.full(5, 0.4)
    fpr, tpr, _ = roc_curve(y, s)
    assert np.array_equal(fpr, [0.0, 1.0])
    assert np.array_equal(tpr, [0.0, 1.0])
    assert auc_roc(y, s) == pytest.approx(0.5)


def test_perfect_and_inverted_rankings():
    y = np.array([0, 0, 1, 1])
    s = np.array([0.1, 0.2, 0.8, 0.9])
    assert auc_roc(y, s) == pytest.approx(1.0)
    assert auc_roc(y, 1 - s) == pytest.approx(0.0)
    assert average_precision(y, s) == pytest.approx(1.0)


def test_auc_roc_matches_pairwise_oracle_with_ties():
    for seed in range(30):
        rng = rng_for(seed)
        n = int(rng.integers(10, 180))
        y = make_labels(n, max(1, min(n - 1, int(n * 0.3))), seed)
        s = np.round(rng.random(n), 2)  # coarse scores force ties
        assert auc_roc(y, s) == pytest.approx(
            mann_whitney_auc(y, s), abs=1e-12
        ), f"seed {seed}"


def test_average_precision_matches_enumeration_oracle():
    for seed in range(30):
        rng = rng_for(100 + seed)
        n = int(rng.integers(10, 180))
        y = make_labels(n, max(1, min(n - 1, int(n * 0.25))), seed)
        s = np.round(rng.random(n), 2)
        assert average_precision(y, s) == pytest.approx(
            ap_oracle(y, s), abs=1e-12
        ), f"seed {seed}"


def test_pr_curve_shape_and_no_anchor():
    y = np.array([1, 0, 1])
    s = np.array([0.9, 0.8, 0.1])
    recall, precision, thr = pr_curve(y, s)
    # one point per distinct score, highest first, no synthetic endpoint
    assert thr.shape == (3,)
    assert np.array_equal(thr, [0.9, 0.8, 0.1])
    assert np.array_equal(recall, [0.5, 0.5, 1.0])
    assert np.array_equal(precision, [1.0, 0.5, 2 / 3])
    ap = 0.5 * 1.0 + 0.0 * 0.5 + 0.5 * (2 / 3)
    assert average_precision(y, s) == pytest.approx(ap)


def test_single_class_raises():
    s = np.array([0.1, 0.9])
    with pytest.raises(ValueError, match="each class"):
        auc_roc(np.array([1, 1]), s)
    with pytest.raises(ValueError, match="each class"):
        average_precision(np.array([0, 0]), s)
    with pytest.raises(ValueError, match="each class"):
        roc_curve(np.array([1, 1]), s)


def test_length_mismatch_raises():
    with pytest.raises(ValueError):
        auc_roc(np.array([0, 1, 1]), np.array([0.2, 0.8]))


def test_confusion_stats_tolerates_single_class():
    y = np.array([0, 0, 0])
    s = np.array([0.9, 0.1, 0.8])
    st = confusion_at(y, s, threshold=0.5)
    assert st.fp == 2 and st.tn == 1 and st.tp == 0 and st.fn == 0
    assert st.degenerate  # recall denominator empty
