"""Command-line interface.

Subcommands: ``resample`` rewrites a CSV with a resampled training set,
``tune`` prints randomized-search results as JSON, ``bench`` runs the full
model x resampler grid and writes its report files, and ``fit`` trains one
model and prints test metrics as JSON. ``--backend`` picks the compute
backend before any work starts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import backend, bench
from ._rng import derive_seed
from .data import load_csv, write_csv
from .metrics import auc_roc, average_precision, confusion_at
from .resample import METHODS, resample
from .tune import MODEL_NAMES, make_model, randomized_search


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraudbench",
        description="Imbalanced binary classification benchmark toolkit.",
    )
    parser.add_argument(
        "--backend",
        choices=("numba", "numpy"),
        default=None,
        help="compute backend (default: numba when available)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resample", help="resample a CSV training set")
    p.add_argument("--method", required=True, choices=("rus", "smote", "smoteenn"))
    p.add_argument("--in", dest="in_path", required=True, help="input CSV")
    p.add_argument("--out", required=True, help="output CSV")
    p.add_argument("--label", default=None, help="label column (default: last)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--k-neighbors", type=int, default=5,
        help="minority neighbors for synthetic interpolation (default 5)",
    )
    p.add_argument(
        "--k-enn", type=int, default=3,
        help="neighbors for the cleaning pass (default 3)",
    )

    p = sub.add_parser("tune", help="randomized hyperparameter search")
    p.add_argument("--model", required=True, choices=MODEL_NAMES)
    p.add_argument("--dataset", required=True, help="training CSV")
    p.add_argument("--label", default=None, help="label column (default: last)")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--iters", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scoring", choices=("roc_auc", "ap"), default="roc_auc")

    p = sub.add_parser("bench", help="run the model x resampler grid")
    p.add_argument(
        "--dataset", choices=("phishing", "creditcard", "both"), default="both"
    )
    p.add_argument(
        "--data",
        default=None,
        help="directory with the dataset CSVs "
        "(default: $FRAUDBENCH_DATA_DIR or ./data)",
    )
    p.add_argument("--out", default="bench_out", help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument(
        "--retune",
        action="store_true",
        help="rerun hyperparameter search instead of using the presets",
    )
    p.add_argument(
        "--config",
        default=None,
        help="JSON file {dataset: {model: {param: value}}} overriding presets",
    )

    p = sub.add_parser("fit", help="train one model, print test metrics")
    p.add_argument("--model", required=True, choices=MODEL_NAMES)
    p.add_argument("--resampler", choices=METHODS, default="none")
    p.add_argument("--train", required=True, help="training CSV")
    p.add_argument("--test", required=True, help="test CSV")
    p.add_argument("--label", default=None, help="label column (default: last)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--params", default=None, help="hyperparameters as inline JSON")
    return parser


def _cmd_resample(args) -> int:
    ds = load_csv(args.in_path, label=args.label)
    rs = resample(
        args.method, ds.X, ds.y, seed=args.seed,
        k_smote=args.k_neighbors, k_enn=args.k_enn,
    )
    write_csv(args.out, rs.X, rs.y, ds.feature_names, ds.label_name)
    pos = int(np.count_nonzero(rs.y == 1))
    print(
        f"{args.method}: {ds.n_rows} rows in, {rs.n_rows} out "
        f"({rs.n_synthetic} synthetic, {pos} positive) -> {args.out}"
    )
    return 0


def _cmd_tune(args) -> int:
    ds = load_csv(args.dataset, label=args.label)
    result = randomized_search(
        args.model, ds.X, ds.y,
        n_iter=args.iters, n_folds=args.folds,
        seed=args.seed, scoring=args.scoring,
    )
    out = {
        "model": result.model_name,
        "scoring": result.scoring,
        "trials": [
            {
                "params": t.params,
                "fold_scores": [float(s) for s in t.fold_scores],
                "mean_score": t.mean_score,
            }
            for t in result.trials
        ],
        "best_params": result.best_params,
        "best_score": result.best_score,
    }
    json.dump(out, sys.stdout, indent=2)
    print()
    return 0


def _cmd_bench(args) -> int:
    data_dir = args.data or os.environ.get("FRAUDBENCH_DATA_DIR", "data")
    names = ("phishing", "creditcard") if args.dataset == "both" else (args.dataset,)
    overrides = {}
    if args.config:
        with open(args.config) as fh:
            overrides = json.load(fh)
    grids = []
    for name in names:
        presets = {
            model: dict(bench.PRESETS[name][model]) for model in bench.MODEL_ORDER
        }
        for model, override in overrides.get(name, {}).items():
            presets[model].update(override)
        ds = bench.load_dataset(name, data_dir)
        grids.append(
            bench.run_grid(
                ds,
                name=name,
                seed=args.seed,
                presets=presets,
                threshold=args.threshold,
                retune=args.retune,
                log=lambda msg: print(msg, file=sys.stderr),
            )
        )
    bench.write_outputs(grids, args.out)
    failed = 0
    for grid in grids:
        for exp in grid.experiments:
            if exp.error is None:
                s = exp.stats
                print(
                    f"{exp.dataset:<10s} {exp.model:<4s} {exp.resampler:<9s} "
                    f"fp={s.fp:<6d} fn={s.fn:<6d} recall={s.recall:.4f} "
                    f"precision={s.precision:.4f} auc_roc={exp.auc_roc:.4f} "
                    f"auc_pr={exp.auc_pr:.4f}"
                )
            else:
                failed += 1
                print(
                    f"{exp.dataset:<10s} {exp.model:<4s} {exp.resampler:<9s} "
                    f"ERROR {exp.error}"
                )
    print(f"report written to {args.out}", file=sys.stderr)
    return 1 if failed else 0


def _cmd_fit(args) -> int:
    train = load_csv(args.train, label=args.label)
    test = load_csv(args.test, label=train.label_name)
    if test.feature_names != train.feature_names:
        raise SystemExit("train and test files must share the same columns")
    params = json.loads(args.params) if args.params else {}
    rs = resample(args.resampler, train.X, train.y, seed=args.seed)
    clf = make_model(
        args.model, params, seed=derive_seed(args.seed, "model", args.model, args.resampler)
    )
    clf.fit(rs.X, rs.y)
    scores = clf.predict_proba(test.X)
    stats = confusion_at(test.y, scores, args.threshold)
    out = {
        "model": args.model,
        "resampler": args.resampler,
        "threshold": args.threshold,
        "train_rows": rs.n_rows,
        "test_rows": test.n_rows,
        "tp": stats.tp, "fp": stats.fp, "tn": stats.tn, "fn": stats.fn,
        "recall": stats.recall,
        "precision": stats.precision,
        "fpr": stats.fpr,
        "accuracy": stats.accuracy,
        "f1": stats.f1,
        "degenerate": stats.degenerate,
        "auc_roc": auc_roc(test.y, scores),
        "auc_pr": average_precision(test.y, scores),
    }
    json.dump(out, sys.stdout, indent=2)
    print()
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.backend:
        backend.use_backend(args.backend)
    if args.command == "resample":
        return _cmd_resample(args)
    if args.command == "tune":
        return _cmd_tune(args)
    if args.command == "bench":
        return _cmd_bench(args)
    return _cmd_fit(args)


if __name__ == "__main__":
    sys.exit(main())
