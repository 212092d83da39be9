"""Dataset loading, validation, z-scoring, and stratified partitioning."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from ._rng import derive_seed


@dataclass
class Dataset:
    """A validated binary-classification table.

    ``X`` is float64 C-contiguous, ``y`` holds int64 labels in {0, 1}.
    """

    X: np.ndarray
    y: np.ndarray
    feature_names: list[str]
    label_name: str

    @property
    def n_rows(self) -> int:
        return int(self.X.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.X.shape[1])

    def class_counts(self) -> tuple[int, int]:
        """(negatives, positives)."""
        pos = int(np.count_nonzero(self.y))
        return self.y.shape[0] - pos, pos

    def prevalence(self) -> float:
        return float(np.count_nonzero(self.y) / self.y.shape[0])


def load_csv(path: str, label: str | None = None) -> Dataset:
    """Load a CSV with a header row into a :class:`Dataset`.

    ``label`` names the class column (default: the last column). All columns
    must be numeric and NaN-free; labels must be 0/1.
    """
    # the default C-engine float parser is not exact; round_trip is
    df = pd.read_csv(path, float_precision="round_trip")
    if df.shape[1] < 2:
        raise ValueError(f"{path}: need at least one feature and a label column")
    if label is None:
        label = str(df.columns[-1])
    if label not in df.columns:
        raise ValueError(f"{path}: label column {label!r} not found")
    for col in df.columns:
        if not pd.api.types.is_numeric_dtype(df[col]):
            raise ValueError(f"{path}: column {col!r} is not numeric")
    if df.isna().any().any():
        bad = [c for c in df.columns if df[c].isna().any()]
        raise ValueError(f"{path}: NaN values in columns {bad}")
    y_raw = df[label].to_numpy()
    if not np.isin(y_raw, (0, 1)).all():
        raise ValueError(f"{path}: label column {label!r} must be binary 0/1")
    feature_names = [str(c) for c in df.columns if c != label]
    X = np.ascontiguousarray(df[feature_names].to_numpy(dtype=np.float64))
    y = y_raw.astype(np.int64)
    return Dataset(X=X, y=y, feature_names=feature_names, label_name=label)


def write_csv(
    path: str,
    X: np.ndarray,
    y: np.ndarray,
    feature_names: list[str],
    label_name: str,
) -> None:
    """Write features plus a trailing label column; floats round-trip."""
    df = pd.DataFrame(np.asarray(X), columns=feature_names)
    df[label_name] = np.asarray(y)
    # 17 significant digits always parse back to the identical double
    df.to_csv(path, index=False, float_format="%.17g")


def zscore_fit(
    X: np.ndarray, columns: np.ndarray | list[int]
) -> tuple[np.ndarray, np.ndarray]:
    """Mean and population std (ddof=0) of the given columns."""
    cols = np.asarray(columns, dtype=np.int64)
    sub = X[:, cols]
    return sub.mean(axis=0), sub.std(axis=0)


def zscore_apply(
    X: np.ndarray,
    columns: np.ndarray | list[int],
    mean: np.ndarray,
    std: np.ndarray,
) -> np.ndarray:
    """Standardize the given columns; constant columns (std 0) become 0."""
    cols = np.asarray(columns, dtype=np.int64)
    out = np.array(X, dtype=np.float64, copy=True, order="C")
    if cols.size == 0:
        return out
    safe = np.where(std == 0.0, 1.0, std)
    z = (X[:, cols] - mean) / safe
    z[:, std == 0.0] = 0.0
    out[:, cols] = z
    return out


def stratified_split(
    y: np.ndarray, test_fraction: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Per-class random split; returns sorted (train_idx, test_idx).

    Each class contributes ``floor(count * test_fraction + 0.5)`` test rows,
    drawn by a seeded per-class shuffle.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    y = np.asarray(y)
    rng = np.random.Generator(np.random.PCG64(seed))
    test_parts = []
    for cls in np.unique(y):
        idx = np.nonzero(y == cls)[0]
        k = int(np.floor(idx.size * test_fraction + 0.5))
        k = min(max(k, 0), idx.size)
        perm = rng.permutation(idx.size)
        test_parts.append(idx[perm[:k]])
    test_idx = np.sort(np.concatenate(test_parts))
    mask = np.ones(y.shape[0], dtype=bool)
    mask[test_idx] = False
    return np.nonzero(mask)[0].astype(np.int64), test_idx.astype(np.int64)


def stratified_kfold(
    y: np.ndarray, n_folds: int, seed: int
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Stratified k-fold assignment; returns [(train_idx, val_idx), ...].

    Fold sizes differ by at most one globally, and each class's count per
    fold differs by at most one: after every class hands ``count // k`` rows
    to each fold, its remainder goes one-per-fold to the folds with the most
    remaining capacity (ties to the lower fold index).
    """
    y = np.asarray(y)
    n = y.shape[0]
    if not 2 <= n_folds <= n:
        raise ValueError(f"n_folds must be in [2, n_rows], got {n_folds}")
    rng = np.random.Generator(np.random.PCG64(seed))
    target = np.full(n_folds, n // n_folds, dtype=np.int64)
    target[: n % n_folds] += 1
    assigned = np.zeros(n_folds, dtype=np.int64)
    fold_of = np.empty(n, dtype=np.int64)
    for cls in np.unique(y):
        idx = np.nonzero(y == cls)[0]
        idx = idx[rng.permutation(idx.size)]
        base, extra = divmod(idx.size, n_folds)
        counts = np.full(n_folds, base, dtype=np.int64)
        if extra:
            capacity = target - assigned - base
            order = np.lexsort((np.arange(n_folds), -capacity))
            counts[order[:extra]] += 1
        if np.any(assigned + counts > target):
            raise AssertionError("fold capacity exceeded; assignment bug")
        pos = 0
        for f in range(n_folds):
            fold_of[idx[pos : pos + counts[f]]] = f
            pos += counts[f]
        assigned += counts
    folds = []
    for f in range(n_folds):
        val = np.nonzero(fold_of == f)[0].astype(np.int64)
        train = np.nonzero(fold_of != f)[0].astype(np.int64)
        folds.append((train, val))
    return folds


def cv_fold_seed(seed: int) -> int:
    """Seed for CV fold assignment derived from a search seed."""
    return derive_seed(seed, "cv-folds")
