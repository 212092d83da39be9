"""Threshold metrics, ROC, and precision-recall evaluation.

Scores are positive-class probabilities (any monotone score works). A row is
predicted positive when ``score > threshold`` (strictly). Curve functions
require both classes to be present and evaluate one point per distinct score.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionStats:
    """Confusion counts with derived rates; rates are 0 when undefined."""

    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def recall(self) -> float:
        d = self.tp + self.fn
        return self.tp / d if d else 0.0

    @property
    def precision(self) -> float:
        d = self.tp + self.fp
        return self.tp / d if d else 0.0

    @property
    def fpr(self) -> float:
        d = self.fp + self.tn
        return self.fp / d if d else 0.0

    @property
    def specificity(self) -> float:
        d = self.fp + self.tn
        return self.tn / d if d else 0.0

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.n if self.n else 0.0

    @property
    def f1(self) -> float:
        d = 2 * self.tp + self.fp + self.fn
        return 2 * self.tp / d if d else 0.0

    @property
    def degenerate(self) -> bool:
        """True when any rate above had a zero denominator."""
        return (
            self.tp + self.fn == 0
            or self.tp + self.fp == 0
            or self.fp + self.tn == 0
        )


def confusion_at(
    y_true: np.ndarray, scores: np.ndarray, threshold: float = 0.5
) -> ConfusionStats:
    """Confusion counts at a score threshold (positive iff score > threshold)."""
    y = np.asarray(y_true).astype(bool)
    pred = np.asarray(scores) > threshold
    tp = int(np.count_nonzero(pred & y))
    fp = int(np.count_nonzero(pred & ~y))
    fn = int(np.count_nonzero(~pred & y))
    tn = int(np.count_nonzero(~pred & ~y))
    return ConfusionStats(tp=tp, fp=fp, tn=tn, fn=fn)


def _sorted_cuts(y_true: np.ndarray, scores: np.ndarray):
    y = np.asarray(y_true).astype(np.int64)
    s = np.asarray(scores, dtype=np.float64)
    if y.shape != s.shape:
        raise ValueError("y_true and scores must have the same shape")
    n_pos = int(np.count_nonzero(y))
    n_neg = y.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("curve metrics need at least one row of each class")
    order = np.argsort(-s, kind="stable")
    ss = s[order]
    yy = y[order]
    cum_tp = np.cumsum(yy)
    cum_fp = np.cumsum(1 - yy)
    # last index of each tie group = one cut per distinct score
    last = np.r_[ss[1:] != ss[:-1], True]
    return ss[last], cum_tp[last], cum_fp[last], n_pos, n_neg


def roc_curve(
    y_true: np.ndarray, scores: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(fpr, tpr, thresholds), threshold-descending, anchored at (0, 0)."""
    thr, tp, fp, n_pos, n_neg = _sorted_cuts(y_true, scores)
    fpr = np.r_[0.0, fp / n_neg]
    tpr = np.r_[0.0, tp / n_pos]
    thresholds = np.r_[np.inf, thr]
    return fpr, tpr, thresholds


def auc_roc(y_true: np.ndarray, scores: np.ndarray) -> float:
    """Trapezoidal area under the ROC curve (ties get half credit)."""
    fpr, tpr, _ = roc_curve(y_true, scores)
    return float(np.trapezoid(tpr, fpr))


def pr_curve(
    y_true: np.ndarray, scores: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(recall, precision, thresholds) per distinct cut, recall ascending."""
    thr, tp, fp, n_pos, _ = _sorted_cuts(y_true, scores)
    recall = tp / n_pos
    precision = tp / (tp + fp)
    return recall, precision, thr


def average_precision(y_true: np.ndarray, scores: np.ndarray) -> float:
    """Step-sum average precision: sum of (R_n - R_{n-1}) * P_n over cuts."""
    recall, precision, _ = pr_curve(y_true, scores)
    return float(np.sum(np.diff(recall, prepend=0.0) * precision))
