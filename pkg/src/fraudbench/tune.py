"""Randomized hyperparameter search with stratified cross-validation.

The search samples distinct parameter combinations from a grid, scores each
by mean validation AUC-ROC (or average precision) over stratified folds, and
keeps the best mean; ties keep the earliest trial. Fold assignment comes
from one seed, every individual fit from a (seed, trial, fold) derivation,
so results are reproducible and fits are independent of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._rng import derive_seed, generator
from .boost import BoostedTreesClassifier
from .data import cv_fold_seed, stratified_kfold
from .linear import LogisticClassifier
from .metrics import auc_roc, average_precision
from .tree import DecisionTreeClassifier, RandomForestClassifier

MODEL_NAMES = ("lr", "dt", "rf", "xgb")

DEFAULT_SPACES: dict[str, dict[str, list]] = {
    "lr": {"C": [0.5, 1.0, 3.0, 5.0, 10.0], "max_iter": [100, 200, 500]},
    "dt": {"max_depth": [None, 8, 12, 16, 20], "min_samples_split": [2, 5, 10]},
    "rf": {"n_estimators": [50, 100, 150], "max_depth": [8, 12, 16, 20]},
    "xgb": {
        "n_estimators": [100, 200],
        "max_depth": [7, 11, 15],
        "learning_rate": [0.05, 0.1, 0.2],
        "gamma": [0.0, 0.1, 0.3],
        "colsample_bytree": [0.8, 0.9, 1.0],
    },
}

_SCORERS = {"roc_auc": auc_roc, "ap": average_precision}


def make_model(name: str, params: dict | None = None, seed: int = 0):
    """Instantiate a model by short name; seeded models get ``seed``."""
    params = dict(params or {})
    if name == "lr":
        return LogisticClassifier(**params)
    if name == "dt":
        return DecisionTreeClassifier(**params)
    params.setdefault("seed", seed)
    if name == "rf":
        return RandomForestClassifier(**params)
    if name == "xgb":
        return BoostedTreesClassifier(**params)
    raise ValueError(f"model must be one of {MODEL_NAMES}, got {name!r}")


@dataclass
class TrialResult:
    params: dict
    fold_scores: np.ndarray
    mean_score: float


@dataclass
class SearchResult:
    model_name: str
    scoring: str
    trials: list[TrialResult] = field(default_factory=list)
    best_index: int = -1

    @property
    def best_params(self) -> dict:
        return self.trials[self.best_index].params

    @property
    def best_score(self) -> float:
        return self.trials[self.best_index].mean_score


def _sample_combos(space: dict[str, list], n_iter: int, seed: int) -> list[dict]:
    """Distinct parameter combinations, decoded from mixed-radix draw ids."""
    keys = list(space.keys())
    sizes = [len(space[k]) for k in keys]
    if any(s == 0 for s in sizes):
        raise ValueError("every space dimension needs at least one value")
    total = int(np.prod(sizes))
    n = min(int(n_iter), total)
    rng = generator(seed, "trials")
    ids = rng.choice(total, size=n, replace=False)
    combos = []
    for cid in ids:
        rem = int(cid)
        params = {}
        for k, size in zip(keys, sizes):
            params[k] = space[k][rem % size]
            rem //= size
        combos.append(params)
    return combos


def randomized_search(
    model_name: str,
    X: np.ndarray,
    y: np.ndarray,
    *,
    space: dict[str, list] | None = None,
    n_iter: int = 5,
    n_folds: int = 10,
    seed: int = 0,
    scoring: str = "roc_auc",
    fixed_params: dict | None = None,
) -> SearchResult:
    """Evaluate ``n_iter`` distinct combinations by stratified k-fold CV.

    ``fixed_params`` is merged into every combination (it does not count
    toward distinctness). Requires every class to appear in every fold, so
    the minority class needs at least ``n_folds`` members.
    """
    if scoring not in _SCORERS:
        raise ValueError(f"scoring must be one of {tuple(_SCORERS)}, got {scoring!r}")
    score_fn = _SCORERS[scoring]
    space = DEFAULT_SPACES[model_name] if space is None else space
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    combos = _sample_combos(space, n_iter, seed)
    folds = stratified_kfold(y, n_folds, cv_fold_seed(seed))
    result = SearchResult(model_name=model_name, scoring=scoring)
    best_score = -np.inf
    for trial, params in enumerate(combos):
        full = dict(params)
        if fixed_params:
            full.update(fixed_params)
        scores = np.empty(len(folds))
        for fold, (tr, va) in enumerate(folds):
            model = make_model(
                model_name, full, seed=derive_seed(seed, "fit", trial, fold)
            )
            model.fit(X[tr], y[tr])
            scores[fold] = score_fn(y[va], model.predict_proba(X[va]))
        mean = float(scores.mean())
        result.trials.append(
            TrialResult(params=full, fold_scores=scores, mean_score=mean)
        )
        if mean > best_score:  # strict: earliest trial wins ties
            best_score = mean
            result.best_index = trial
    return result
