"""Shared fixtures: dataset discovery and backend isolation."""

from __future__ import annotations

import os

import pytest

from fraudbench import backend
from fraudbench.bench import DATASETS


def repo_root() -> str:
    return os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def data_dir() -> str:
    """Directory holding the benchmark CSVs (env override or ./data)."""
    configured = os.environ.get("FRAUDBENCH_DATA_DIR")
    if configured:
        return configured
    return os.path.join(repo_root(), "data")


def dataset_path_or_skip(name: str) -> str:
    """Path to a benchmark CSV, skipping the test when it is not present."""
    spec = DATASETS[name]
    path = os.path.join(data_dir(), spec.filename)
    if not os.path.isfile(path):
        pytest.skip(
            f"dataset file {spec.filename} not found in {data_dir()} "
            f"(set FRAUDBENCH_DATA_DIR or place it in ./data)"
        )
    return path


@pytest.fixture(autouse=True)
def _reset_backend():
    """Keep backend forcing from leaking between tests."""
    yield
    backend.use_backend(None)
