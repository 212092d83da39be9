"""End-to-end benchmark grid: every model crossed with every resampler.

Pipeline, in fixed order: load, stratified 80/20 split, z-score fit on the
training partition only, resample the training partition only, fit, score
the untouched test partition, report. Per-step seeds derive from one master
seed by labeled paths ("split"; "resample", method; "model", model,
resampler; "tune", model), so any experiment can be reproduced in isolation
and two same-seed runs emit byte-identical tables.

Outputs: ``results.csv`` (one row per experiment, stable order and float
format), ``results.json`` (config, class counts, wall times), and
``curves/`` (one ROC and one PR file per experiment).
"""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import backend
from ._rng import derive_seed
from .data import Dataset, load_csv, stratified_split, zscore_apply, zscore_fit
from .metrics import (
    ConfusionStats,
    auc_roc,
    average_precision,
    confusion_at,
    pr_curve,
    roc_curve,
)
from .resample import ResampledSet, resample
from .tune import DEFAULT_SPACES, make_model, randomized_search

TEST_FRACTION = 0.2
MODEL_ORDER = ("lr", "dt", "rf", "xgb")
RESAMPLER_ORDER = ("none", "rus", "smote", "smoteenn")

# sentinel preset value: sqrt(n_negative / n_positive) of the training
# partition, computed before any resampling and shared by all resamplers
SQRT_RATIO = "sqrt_ratio"

CSV_COLUMNS = (
    "dataset", "model", "resampler", "fp", "fn",
    "recall", "precision", "auc_roc", "auc_pr",
)


@dataclass(frozen=True)
class DatasetSpec:
    """A benchmark dataset: file name, label column, columns to z-score."""

    name: str
    filename: str
    label: str
    zscore_columns: tuple[str, ...]


DATASETS: dict[str, DatasetSpec] = {
    "phishing": DatasetSpec("phishing", "phishing.csv", "phishing", ()),
    "creditcard": DatasetSpec(
        "creditcard", "creditcard.csv", "Class", ("Time", "Amount")
    ),
}

PRESETS: dict[str, dict[str, dict]] = {
    "phishing": {
        "lr": {"C": 5.0, "max_iter": 500},
        "dt": {"max_depth": None, "min_samples_split": 2},
        "rf": {"n_estimators": 100, "max_depth": 20},
        "xgb": {
            "n_estimators": 200,
            "max_depth": 15,
            "learning_rate": 0.1,
            "gamma": 0.3,
            "colsample_bytree": 0.9,
            "reg_lambda": 1.0,
            "scale_pos_weight": 1.63,
        },
    },
    "creditcard": {
        "lr": {"C": 3.0, "max_iter": 100},
        "dt": {"max_depth": None, "min_samples_split": 2},
        "rf": {"n_estimators": 50, "max_depth": 12},
        "xgb": {
            "n_estimators": 100,
            "max_depth": 11,
            "learning_rate": 0.1,
            "gamma": 0.3,
            "colsample_bytree": 0.9,
            "reg_lambda": 1.0,
            "scale_pos_weight": SQRT_RATIO,
        },
    },
}


@dataclass
class Experiment:
    """One (model, resampler) cell of the grid."""

    dataset: str
    model: str
    resampler: str
    params: dict
    fit_seed: int
    stats: ConfusionStats | None = None
    auc_roc: float = math.nan
    auc_pr: float = math.nan
    fit_seconds: float = 0.0
    score_seconds: float = 0.0
    train_rows: int = 0
    train_pos: int = 0
    scores: np.ndarray | None = None
    roc: tuple | None = None
    pr: tuple | None = None
    error: str | None = None


@dataclass
class GridResult:
    """All experiments of one dataset plus the shared partitions."""

    dataset: str
    seed: int
    threshold: float
    n_rows: int
    n_features: int
    class_counts: tuple[int, int]
    train_idx: np.ndarray
    test_idx: np.ndarray
    y_test: np.ndarray
    params: dict[str, dict]
    resampled: dict[str, ResampledSet] = field(default_factory=dict)
    resample_errors: dict[str, str] = field(default_factory=dict)
    experiments: list[Experiment] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.resample_errors and all(
            e.error is None for e in self.experiments
        )


def load_dataset(name: str, data_dir: str) -> Dataset:
    """Load a named benchmark dataset from ``data_dir``."""
    if name not in DATASETS:
        raise ValueError(f"dataset must be one of {tuple(DATASETS)}, got {name!r}")
    spec = DATASETS[name]
    return load_csv(os.path.join(data_dir, spec.filename), label=spec.label)


def resolve_params(preset: dict, y_train: np.ndarray) -> dict:
    """Replace the ``SQRT_RATIO`` sentinel with its value on this partition."""
    params = dict(preset)
    if params.get("scale_pos_weight") == SQRT_RATIO:
        pos = int(np.count_nonzero(y_train == 1))
        neg = int(y_train.shape[0] - pos)
        if pos == 0:
            raise ValueError("cannot resolve scale_pos_weight without positives")
        params["scale_pos_weight"] = math.sqrt(neg / pos)
    return params


def run_experiment(
    dataset: str,
    model: str,
    resampler: str,
    train: ResampledSet,
    X_test: np.ndarray,
    y_test: np.ndarray,
    params: dict,
    fit_seed: int,
    threshold: float = 0.5,
) -> Experiment:
    """Fit one model on one resampled training set and score the test set."""
    exp = Experiment(
        dataset=dataset,
        model=model,
        resampler=resampler,
        params=dict(params),
        fit_seed=fit_seed,
        train_rows=train.n_rows,
        train_pos=int(np.count_nonzero(train.y == 1)),
    )
    try:
        clf = make_model(model, params, seed=fit_seed)
        t0 = time.perf_counter()
        clf.fit(train.X, train.y)
        t1 = time.perf_counter()
        scores = clf.predict_proba(X_test)
        t2 = time.perf_counter()
        exp.fit_seconds = t1 - t0
        exp.score_seconds = t2 - t1
        exp.scores = scores
        exp.stats = confusion_at(y_test, scores, threshold)
        exp.auc_roc = auc_roc(y_test, scores)
        exp.auc_pr = average_precision(y_test, scores)
        exp.roc = roc_curve(y_test, scores)
        exp.pr = pr_curve(y_test, scores)
    except Exception as err:  # keep the grid going; surfaced in outputs
        exp.error = f"{type(err).__name__}: {err}"
    return exp


def run_grid(
    dataset: Dataset,
    *,
    name: str,
    seed: int = 0,
    zscore_columns: tuple[str, ...] | None = None,
    presets: dict[str, dict] | None = None,
    threshold: float = 0.5,
    retune: bool = False,
    tune_iters: int = 5,
    tune_folds: int = 10,
    scoring: str = "roc_auc",
    log=None,
) -> GridResult:
    """Run the full model x resampler grid on one dataset."""
    if presets is None:
        if name not in PRESETS:
            raise ValueError(
                f"no presets for dataset {name!r}; pass presets= explicitly"
            )
        presets = PRESETS[name]
    if zscore_columns is None:
        zscore_columns = DATASETS[name].zscore_columns if name in DATASETS else ()
    say = log if log is not None else (lambda msg: None)

    train_idx, test_idx = stratified_split(
        dataset.y, TEST_FRACTION, derive_seed(seed, "split")
    )
    X = dataset.X
    if zscore_columns:
        cols = [dataset.feature_names.index(c) for c in zscore_columns]
        mean, std = zscore_fit(X[train_idx], cols)
        X = zscore_apply(X, cols, mean, std)
    X_train = np.ascontiguousarray(X[train_idx])
    y_train = dataset.y[train_idx]
    X_test = np.ascontiguousarray(X[test_idx])
    y_test = dataset.y[test_idx]

    params: dict[str, dict] = {
        model: resolve_params(presets[model], y_train) for model in MODEL_ORDER
    }
    if retune:
        for model in MODEL_ORDER:
            say(f"[{name}] tuning {model}")
            space = DEFAULT_SPACES[model]
            fixed = {
                k: v for k, v in params[model].items() if k not in space
            }
            search = randomized_search(
                model,
                X_train,
                y_train,
                space=space,
                n_iter=tune_iters,
                n_folds=tune_folds,
                seed=derive_seed(seed, "tune", model),
                scoring=scoring,
                fixed_params=fixed or None,
            )
            params[model] = dict(search.best_params)
            say(f"[{name}] {model} best {search.best_score:.4f}: {params[model]}")

    grid = GridResult(
        dataset=name,
        seed=seed,
        threshold=threshold,
        n_rows=dataset.n_rows,
        n_features=dataset.n_features,
        class_counts=dataset.class_counts(),
        train_idx=train_idx,
        test_idx=test_idx,
        y_test=y_test,
        params=params,
    )

    for method in RESAMPLER_ORDER:
        say(f"[{name}] resampling: {method}")
        try:
            grid.resampled[method] = resample(method, X_train, y_train, seed=seed)
        except Exception as err:
            grid.resample_errors[method] = f"{type(err).__name__}: {err}"

    for model in MODEL_ORDER:
        for method in RESAMPLER_ORDER:
            say(f"[{name}] fit: {model} + {method}")
            if method not in grid.resampled:
                exp = Experiment(
                    dataset=name,
                    model=model,
                    resampler=method,
                    params=params[model],
                    fit_seed=derive_seed(seed, "model", model, method),
                    error=f"resample failed: {grid.resample_errors[method]}",
                )
            else:
                exp = run_experiment(
                    name,
                    model,
                    method,
                    grid.resampled[method],
                    X_test,
                    y_test,
                    params[model],
                    derive_seed(seed, "model", model, method),
                    threshold,
                )
            if exp.error is not None:
                say(f"[{name}] {model} + {method} FAILED: {exp.error}")
            grid.experiments.append(exp)
    return grid


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def write_outputs(grids: list[GridResult], out_dir: str) -> None:
    """Write results.csv, results.json, and per-experiment curve files.

    results.csv carries no timestamps or timings, so two runs with the same
    seed produce byte-identical files; timings live in results.json.
    """
    os.makedirs(out_dir, exist_ok=True)
    curves_dir = os.path.join(out_dir, "curves")
    os.makedirs(curves_dir, exist_ok=True)

    lines = [",".join(CSV_COLUMNS)]
    for grid in grids:
        for exp in grid.experiments:
            if exp.error is not None or exp.stats is None:
                continue
            s = exp.stats
            lines.append(
                f"{exp.dataset},{exp.model},{exp.resampler},{s.fp},{s.fn},"
                f"{s.recall:.6f},{s.precision:.6f},"
                f"{exp.auc_roc:.6f},{exp.auc_pr:.6f}"
            )
    with open(os.path.join(out_dir, "results.csv"), "w") as fh:
        fh.write("\n".join(lines) + "\n")

    report = {
        "backend": backend.current_backend_name(),
        "datasets": {},
        "experiments": [],
    }
    for grid in grids:
        neg, pos = grid.class_counts
        report["datasets"][grid.dataset] = {
            "seed": grid.seed,
            "threshold": grid.threshold,
            "rows": grid.n_rows,
            "features": grid.n_features,
            "negatives": neg,
            "positives": pos,
            "train_rows": int(grid.train_idx.shape[0]),
            "test_rows": int(grid.test_idx.shape[0]),
            "params": _json_safe(grid.params),
            "resampled_rows": {
                m: rs.n_rows for m, rs in grid.resampled.items()
            },
            "resample_errors": dict(grid.resample_errors),
        }
        for exp in grid.experiments:
            row = {
                "dataset": exp.dataset,
                "model": exp.model,
                "resampler": exp.resampler,
                "train_rows": exp.train_rows,
                "train_positives": exp.train_pos,
                "fit_seconds": round(exp.fit_seconds, 3),
                "score_seconds": round(exp.score_seconds, 3),
            }
            if exp.error is not None:
                row["error"] = exp.error
            else:
                s = exp.stats
                row.update(
                    tp=s.tp, fp=s.fp, tn=s.tn, fn=s.fn,
                    recall=s.recall, precision=s.precision,
                    auc_roc=exp.auc_roc, auc_pr=exp.auc_pr,
                )
            report["experiments"].append(_json_safe(row))
    with open(os.path.join(out_dir, "results.json"), "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")

    for grid in grids:
        for exp in grid.experiments:
            if exp.error is not None:
                continue
            stem = f"{exp.dataset}_{exp.model}_{exp.resampler}"
            fpr, tpr, thr = exp.roc
            _write_curve(
                os.path.join(curves_dir, f"{stem}_roc.csv"),
                ("threshold", "fpr", "tpr"), (thr, fpr, tpr),
            )
            recall, precision, thr = exp.pr
            _write_curve(
                os.path.join(curves_dir, f"{stem}_pr.csv"),
                ("threshold", "recall", "precision"), (thr, recall, precision),
            )


def _write_curve(path: str, names: tuple[str, ...], cols: tuple[np.ndarray, ...]):
    with open(path, "w") as fh:
        fh.write(",".join(names) + "\n")
        for row in zip(*cols):
            fh.write(",".join(f"{v:.10g}" for v in row) + "\n")
