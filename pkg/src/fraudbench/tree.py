"""Entropy-split decision tree and bootstrap-aggregated random forest.

Both models grow level-wise through the shared grower: splits maximize
information gain in bits, thresholds sit at guarded midpoints between
consecutive distinct values, and the rule ``x[feature] <= threshold`` routes
left. Ties in gain keep the earliest candidate within a feature and the
lowest feature index across features.

The forest draws, per tree, an n-out-of-n bootstrap expressed as integer
row weights, and per tree level a fresh ceil(sqrt(m))-feature candidate
subset per node. Out-of-bag rows (bootstrap count zero) get a majority vote
over the trees that skipped them; a tied vote counts as a negative
prediction.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ._grower import MODE_ENTROPY, Tree, grow_tree, presort_features
from ._portable import entropy_bits, entropy_gain, entropy_gain_vec, split_threshold
from ._rng import generator


def _binary_labels(labels) -> np.ndarray:
    y = np.asarray(labels)
    if y.size and not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be 0/1")
    return y.astype(np.int64)


def entropy(labels) -> float:
    """Shannon entropy in bits of a 0/1 label array."""
    y = _binary_labels(labels)
    if y.size == 0:
        return 0.0
    return entropy_bits(float(y.size), float(np.count_nonzero(y)))


def information_gain(parent, left, right) -> float:
    """Entropy decrease from partitioning ``parent`` into ``left`` + ``right``."""
    yp = _binary_labels(parent)
    yl = _binary_labels(left)
    yr = _binary_labels(right)
    if yl.size + yr.size != yp.size:
        raise ValueError("left and right must partition parent")
    pp = int(np.count_nonzero(yp))
    if int(np.count_nonzero(yl)) + int(np.count_nonzero(yr)) != pp:
        raise ValueError("left and right must partition parent")
    return entropy_gain(
        float(yp.size), float(pp), float(yl.size), float(np.count_nonzero(yl))
    )


class Split(NamedTuple):
    """Best split of one node: ``feature`` is -1 when no candidate exists."""

    feature: int
    threshold: float
    gain: float


def best_split(
    X: np.ndarray, y: np.ndarray, sample_weight: np.ndarray | None = None
) -> Split:
    """Exhaustive best entropy split over all features of one node.

    Mirrors the grower's root-level scan operation for operation, so the
    returned (feature, threshold, gain) is exactly what a tree fit on the
    same rows puts at its root. The caller decides whether ``gain > 0``
    justifies splitting.
    """
    X = np.asarray(X, dtype=np.float64)
    y = _binary_labels(y)
    n, m = X.shape
    w = np.ones(n) if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)
    a = w
    b = w * y
    W = float(a.sum())
    WY = float(b.sum())
    best_f = -1
    best_t = math.nan
    best_g = -math.inf
    for fi in range(m):
        o = np.argsort(X[:, fi], kind="stable")
        v = X[o, fi]
        ca = np.cumsum(a[o])
        cb = np.cumsum(b[o])
        cand = np.nonzero(v[1:] != v[:-1])[0]
        if cand.size == 0:
            continue
        al = ca[cand]
        bl = cb[cand]
        gv = entropy_gain_vec(
            np.full(cand.size, W), np.full(cand.size, WY), al, bl
        )
        j = int(np.argmax(gv))  # first max = earliest scan position
        if gv[j] > best_g:  # strict: lowest feature index wins ties
            best_g = float(gv[j])
            best_f = fi
            best_t = split_threshold(v[cand[j]], v[cand[j] + 1])
    if best_f < 0:
        return Split(-1, math.nan, 0.0)
    return Split(best_f, best_t, best_g)


def _validate_xy(X, y):
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = _binary_labels(y)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ValueError("X must be (n, m) and y must be (n,)")
    if X.shape[0] == 0:
        raise ValueError("cannot fit on an empty dataset")
    return X, y


class DecisionTreeClassifier:
    """Single entropy-split tree; ``max_depth=None`` grows until pure."""

    def __init__(self, max_depth: int | None = None, min_samples_split: int = 2):
        self.max_depth = max_depth
        self.min_samples_split = int(min_samples_split)
        self.tree_: Tree | None = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "DecisionTreeClassifier":
        X, y = _validate_xy(X, y)
        presorted = presort_features(X)
        md = -1 if self.max_depth is None else int(self.max_depth)
        self.tree_, _ = grow_tree(
            X,
            np.ones(X.shape[0]),
            y.astype(np.float64),
            mode=MODE_ENTROPY,
            presorted=presorted,
            max_depth=md,
            min_weight_split=float(self.min_samples_split),
        )
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Positive-class fraction of each row's leaf."""
        if self.tree_ is None:
            raise RuntimeError("fit before predicting")
        return self.tree_.predict_values(X)

    def predict(self, X: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X) > threshold).astype(np.int64)


class RandomForestClassifier:
    """Bagged entropy trees with per-node random feature subsets.

    ``warm_start=True`` lets a later ``fit`` on the same data grow the
    forest from its current size up to ``n_estimators``; tree i is seeded by
    (seed, tree index), so growing 50 then 50 more equals growing 100.
    """

    def __init__(
        self,
        n_estimators: int = 100,
        max_depth: int | None = None,
        min_samples_split: int = 2,
        seed: int = 0,
        oob_score: bool = True,
        warm_start: bool = False,
    ):
        self.n_estimators = int(n_estimators)
        self.max_depth = max_depth
        self.min_samples_split = int(min_samples_split)
        self.seed = int(seed)
        self.oob_score = bool(oob_score)
        self.warm_start = bool(warm_start)
        self.trees_: list[Tree] = []
        self.oob_score_: float = math.nan
        self._shape: tuple[int, int] | None = None
        self._oob_pos: np.ndarray | None = None
        self._oob_neg: np.ndarray | None = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "RandomForestClassifier":
        X, y = _validate_xy(X, y)
        n, m = X.shape
        if self.warm_start and self.trees_:
            if self._shape != (n, m):
                raise ValueError("warm_start requires the same training matrix")
            if self.n_estimators < len(self.trees_):
                raise ValueError(
                    "warm_start cannot shrink the forest: "
                    f"{self.n_estimators} < {len(self.trees_)}"
                )
        else:
            self.trees_ = []
            self._oob_pos = np.zeros(n, dtype=np.int64)
            self._oob_neg = np.zeros(n, dtype=np.int64)
        self._shape = (n, m)
        presorted = presort_features(X)
        yf = y.astype(np.float64)
        k_feats = math.ceil(math.sqrt(m))
        md = -1 if self.max_depth is None else int(self.max_depth)
        for i in range(len(self.trees_), self.n_estimators):
            rng = generator(self.seed, "tree", i)
            counts = np.bincount(rng.integers(0, n, size=n), minlength=n)
            keep = counts > 0
            a = counts.astype(np.float64)

            def draw(K: int, mf: int, rng=rng) -> np.ndarray:
                pick = np.argsort(rng.random((K, mf)), axis=1)[:, :k_feats]
                mask = np.zeros((K, mf), dtype=np.uint8)
                mask[np.arange(K)[:, None], pick] = 1
                return mask

            tree, _ = grow_tree(
                X,
                a,
                a * yf,
                mode=MODE_ENTROPY,
                presorted=presorted,
                keep_mask=keep,
                max_depth=md,
                min_weight_split=float(self.min_samples_split),
                subset_draw=draw,
            )
            self.trees_.append(tree)
            if self.oob_score:
                oob = np.nonzero(~keep)[0]
                if oob.size:
                    vote_pos = tree.predict_values(X[oob]) > 0.5
                    self._oob_pos[oob[vote_pos]] += 1
                    self._oob_neg[oob[~vote_pos]] += 1
        if self.oob_score:
            voted = (self._oob_pos + self._oob_neg) > 0
            if voted.any():
                pred = self._oob_pos > self._oob_neg  # tie votes negative
                self.oob_score_ = float(np.mean(pred[voted] == (y[voted] == 1)))
            else:
                self.oob_score_ = math.nan
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Mean positive-class leaf fraction over the forest."""
        if not self.trees_:
            raise RuntimeError("fit before predicting")
        X = np.ascontiguousarray(X, dtype=np.float64)
        acc = np.zeros(X.shape[0])
        for tree in self.trees_:
            acc += tree.predict_values(X)
        return acc / len(self.trees_)

    def predict(self, X: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X) > threshold).astype(np.int64)
