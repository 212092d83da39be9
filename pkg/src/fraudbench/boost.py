"""Second-order gradient boosting of regression trees on logistic loss.

Each round fits a tree to the per-row gradient/hessian of weighted logistic
loss at the current margin, with positives weighted by ``scale_pos_weight``.
Leaves store the learning-rate-scaled Newton step -g_sum / (h_sum + lambda);
a split is accepted only when the structure-score gain, minus the ``gamma``
complexity penalty, is positive. Margins start at the log-odds of the
training prevalence, so fitting demands both classes.

``train_loss_`` records the weighted-sum logistic loss before boosting and
after every round (length ``n_estimators + 1``); probabilities are clamped
to [1e-15, 1 - 1e-15] inside the loss only, never in the gradients.
"""

from __future__ import annotations

import math

import numpy as np

from ._grower import MODE_SECOND_ORDER, Tree, grow_tree, presort_features
from ._portable import second_order_gain
from ._rng import generator


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0.0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def gradient_hessian(
    p: np.ndarray, y: np.ndarray, scale_pos_weight: float = 1.0
) -> tuple[np.ndarray, np.ndarray]:
    """Per-row first and second margin derivatives of weighted logistic loss.

    ``p`` is the current predicted probability; positives carry weight
    ``scale_pos_weight``, negatives weight 1.
    """
    p = np.asarray(p, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    w = np.where(y == 1.0, float(scale_pos_weight), 1.0)
    g = (p - y) * w
    h = p * (1.0 - p) * w
    return g, h


def leaf_weight(g_sum: float, h_sum: float, reg_lambda: float = 1.0) -> float:
    """Optimal leaf output -G / (H + lambda) for gradient total G, hessian H."""
    return -g_sum / (h_sum + reg_lambda)


def split_gain(
    g_sum: float,
    h_sum: float,
    g_left: float,
    h_left: float,
    reg_lambda: float = 1.0,
    gamma: float = 0.0,
) -> float:
    """Structure-score improvement of splitting (G, H) at (G_left, H_left)."""
    return second_order_gain(g_sum, h_sum, g_left, h_left, reg_lambda, gamma)


class BoostedTreesClassifier:
    """Gradient-boosted trees for binary classification."""

    def __init__(
        self,
        n_estimators: int = 100,
        max_depth: int = 6,
        learning_rate: float = 0.1,
        gamma: float = 0.0,
        reg_lambda: float = 1.0,
        colsample_bytree: float = 1.0,
        scale_pos_weight: float = 1.0,
        seed: int = 0,
    ):
        self.n_estimators = int(n_estimators)
        self.max_depth = max_depth
        self.learning_rate = float(learning_rate)
        self.gamma = float(gamma)
        self.reg_lambda = float(reg_lambda)
        self.colsample_bytree = float(colsample_bytree)
        self.scale_pos_weight = float(scale_pos_weight)
        self.seed = int(seed)
        self.trees_: list[Tree] = []
        self.base_margin_: float = 0.0
        self.train_loss_: np.ndarray | None = None

    @staticmethod
    def _loss(margin: np.ndarray, yf: np.ndarray, w: np.ndarray) -> float:
        p = np.clip(_sigmoid(margin), 1e-15, 1.0 - 1e-15)
        return float(-(w * (yf * np.log(p) + (1.0 - yf) * np.log(1.0 - p))).sum())

    def fit(self, X: np.ndarray, y: np.ndarray) -> "BoostedTreesClassifier":
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.asarray(y)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise ValueError("X must be (n, m) and y must be (n,)")
        n, m = X.shape
        n_pos = int(np.count_nonzero(y == 1))
        n_neg = int(np.count_nonzero(y == 0))
        if n_pos + n_neg != n:
            raise ValueError("labels must be 0/1")
        if n_pos == 0 or n_neg == 0:
            raise ValueError("training data must contain both classes")
        self.base_margin_ = math.log(n_pos / n_neg)
        yf = y.astype(np.float64)
        w = np.where(yf == 1.0, self.scale_pos_weight, 1.0)
        margin = np.full(n, self.base_margin_)
        presorted = presort_features(X)
        k_cols = min(m, math.ceil(self.colsample_bytree * m))
        if k_cols < 1:
            raise ValueError("colsample_bytree keeps no features")
        md = -1 if self.max_depth is None else int(self.max_depth)
        self.trees_ = []
        losses = [self._loss(margin, yf, w)]
        for t in range(self.n_estimators):
            p = _sigmoid(margin)
            g = (p - yf) * w
            h = p * (1.0 - p) * w
            if k_cols == m:
                feat_ids = None
            else:
                rng = generator(self.seed, "tree", t)
                feat_ids = np.sort(rng.choice(m, size=k_cols, replace=False))
            tree, leaf_of_row = grow_tree(
                X,
                g,
                h,
                mode=MODE_SECOND_ORDER,
                presorted=presorted,
                feat_ids=feat_ids,
                max_depth=md,
                lam=self.reg_lambda,
                gamma=self.gamma,
                leaf_scale=self.learning_rate,
            )
            margin += leaf_of_row
            self.trees_.append(tree)
            losses.append(self._loss(margin, yf, w))
        self.train_loss_ = np.asarray(losses)
        return self

    def predict_margin(self, X: np.ndarray) -> np.ndarray:
        if self.train_loss_ is None:
            raise RuntimeError("fit before predicting")
        X = np.ascontiguousarray(X, dtype=np.float64)
        margin = np.full(X.shape[0], self.base_margin_)
        for tree in self.trees_:
            margin += tree.predict_values(X)
        return margin

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return _sigmoid(self.predict_margin(X))

    def predict(self, X: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X) > threshold).astype(np.int64)
