"""Command-line entry points, run in-process on miniature datasets."""

import csv
import json
import os

import numpy as np
import pytest

from fraudbench.cli import main
from fraudbench.data import load_csv, write_csv

from _synth import make_classification


def write_mini(path, n, m, prevalence, seed, names, label):
    X, y = make_classification(n, m, prevalence=prevalence, seed=seed)
    write_csv(str(path), X, y, names, label)
    return X, y


@pytest.fixture()
def data_dir(tmp_path):
    d = tmp_path / "data"
    d.mkdir()
    write_mini(
        d / "phishing.csv", 300, 5, 0.44, 1,
        [f"url_feat_{i}" for i in range(5)], "phishing",
    )
    write_mini(
        d / "creditcard.csv", 400, 5, 0.08, 2,
        ["Time", "V1", "V2", "V3", "Amount"], "Class",
    )
    return d


def test_resample_command_balances_file(tmp_path, capsys):
    src = tmp_path / "train.csv"
    write_mini(src, 200, 4, 0.15, 3, [f"f{i}" for i in range(4)], "y")
    out = tmp_path / "balanced.csv"
    rc = main([
        "resample", "--method", "smote", "--in", str(src),
        "--out", str(out), "--label", "y", "--seed", "5",
        "--k-neighbors", "3",
    ])
    assert rc == 0
    ds = load_csv(str(out), label="y")
    pos = int(ds.y.sum())
    assert pos == ds.n_rows - pos
    msg = capsys.readouterr().out
    assert "smote" in msg and "synthetic" in msg


def test_resample_rus_output(tmp_path):
    src = tmp_path / "train.csv"
    _, y = write_mini(src, 150, 3, 0.2, 4, ["a", "b", "c"], "y")
    out = tmp_path / "rus.csv"
    assert main([
        "resample", "--method", "rus", "--in", str(src),
        "--out", str(out), "--label", "y",
    ]) == 0
    ds = load_csv(str(out), label="y")
    assert int(ds.y.sum()) * 2 == ds.n_rows
    assert ds.n_rows == 2 * int(y.sum())


def test_fit_command_emits_metrics_json(tmp_path, capsys):
    names = [f"f{i}" for i in range(4)]
    train = tmp_path / "train.csv"
    test = tmp_path / "test.csv"
    write_mini(train, 240, 4, 0.25, 6, names, "y")
    write_mini(test, 120, 4, 0.25, 7, names, "y")
    rc = main([
        "fit", "--model", "xgb", "--resampler", "rus",
        "--train", str(train), "--test", str(test), "--label", "y",
        "--seed", "3", "--params",
        '{"n_estimators": 8, "max_depth": 3, "learning_rate": 0.3}',
    ])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    for key in (
        "tp", "fp", "tn", "fn", "recall", "precision", "fpr",
        "accuracy", "f1", "degenerate", "auc_roc", "auc_pr",
    ):
        assert key in out
    assert out["model"] == "xgb" and out["resampler"] == "rus"
    assert out["tp"] + out["fp"] + out["tn"] + out["fn"] == 120
    assert 0.0 <= out["auc_roc"] <= 1.0
    assert int(out["train_rows"]) % 2 == 0  # balanced by undersampling


def test_fit_rejects_mismatched_columns(tmp_path):
    write_mini(tmp_path / "a.csv", 50, 3, 0.3, 8, ["x", "y2", "z"], "y")
    write_mini(tmp_path / "b.csv", 50, 3, 0.3, 9, ["x", "DIFFERENT", "z"], "y")
    with pytest.raises(SystemExit, match="same columns"):
        main([
            "fit", "--model", "dt",
            "--train", str(tmp_path / "a.csv"),
            "--test", str(tmp_path / "b.csv"), "--label", "y",
        ])


def test_tune_command_prints_search_json(tmp_path, capsys):
    src = tmp_path / "train.csv"
    write_mini(src, 150, 4, 0.3, 10, [f"f{i}" for i in range(4)], "y")
    rc = main([
        "tune", "--model", "dt", "--dataset", str(src), "--label", "y",
        "--folds", "3", "--iters", "3", "--seed", "2",
    ])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["model"] == "dt" and out["scoring"] == "roc_auc"
    assert len(out["trials"]) == 3
    assert out["best_params"]["max_depth"] in (None, 8, 12, 16, 20)
    assert all(len(t["fold_scores"]) == 3 for t in out["trials"])
    assert out["best_score"] == max(t["mean_score"] for t in out["trials"])


def test_bench_command_full_grid(data_dir, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    shrink = {
        "rf": {"n_estimators": 6, "max_depth": 6},
        "xgb": {"n_estimators": 8, "max_depth": 3},
        "lr": {"max_iter": 60},
    }
    cfg.write_text(json.dumps({"phishing": shrink, "creditcard": shrink}))
    out_dir = tmp_path / "report"
    rc = main([
        "bench", "--dataset", "both", "--data", str(data_dir),
        "--out", str(out_dir), "--seed", "1", "--config", str(cfg),
    ])
    assert rc == 0
    stdout = capsys.readouterr().out
    assert stdout.count("\n") == 32  # one table line per experiment
    assert "ERROR" not in stdout
    with open(out_dir / "results.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 32
    assert {r["dataset"] for r in rows} == {"phishing", "creditcard"}
    assert len(os.listdir(out_dir / "curves")) == 64
    report = json.loads((out_dir / "results.json").read_text())
    # shrunken overrides actually reached the models
    assert report["datasets"]["phishing"]["params"]["rf"]["n_estimators"] == 6
    # the ratio sentinel still resolves to a number under overrides
    spw = report["datasets"]["creditcard"]["params"]["xgb"]["scale_pos_weight"]
    assert isinstance(spw, float) and spw > 1.0


def test_bench_single_dataset_numpy_backend(data_dir, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "phishing": {
            "rf": {"n_estimators": 4, "max_depth": 5},
            "xgb": {"n_estimators": 5, "max_depth": 3},
            "lr": {"max_iter": 40},
            "dt": {"max_depth": 8},
        }
    }))
    out_dir = tmp_path / "report"
    rc = main([
        "--backend", "numpy", "bench", "--dataset", "phishing",
        "--data", str(data_dir), "--out", str(out_dir),
        "--seed", "2", "--config", str(cfg),
    ])
    assert rc == 0
    capsys.readouterr()
    report = json.loads((out_dir / "results.json").read_text())
    assert report["backend"] == "numpy"
    assert len(report["experiments"]) == 16


def test_bench_reports_failures_with_exit_code(tmp_path, capsys):
    d = tmp_path / "data"
    d.mkdir()
    # one lone positive: synthetic resamplers cannot run and the
    # single-class test partition breaks every ranking metric
    rng = np.random.Generator(np.random.PCG64(3))
    X = rng.normal(size=(80, 4))
    y = np.zeros(80, dtype=np.int64)
    y[11] = 1
    write_csv(
        str(d / "creditcard.csv"), X, y,
        ["Time", "V1", "V2", "Amount"], "Class",
    )
    out_dir = tmp_path / "report"
    rc = main([
        "bench", "--dataset", "creditcard", "--data", str(d),
        "--out", str(out_dir), "--seed", "0",
    ])
    assert rc == 1
    assert "ERROR" in capsys.readouterr().out
    report = json.loads((out_dir / "results.json").read_text())
    errs = report["datasets"]["creditcard"]["resample_errors"]
    assert set(errs) == {"smote", "smoteenn"}


def test_missing_subcommand_exits():
    with pytest.raises(SystemExit):
        main([])
