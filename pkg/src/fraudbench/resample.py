"""Training-set resampling: random undersampling, synthetic oversampling
by minority interpolation, edited-neighbor cleaning, and their composition.

All methods operate on the training partition only and are deterministic
given (data, seed). Randomness comes from one PCG64 generator per call with
a documented draw order; nearest-neighbor searches are exact (see
``knn_self`` in the backend kernels). The minority class is the rarer label
(ties treat label 1 as minority).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from ._rng import derive_seed

METHODS = ("none", "rus", "smote", "smoteenn")


@dataclass
class ResampledSet:
    """A resampled training set with row provenance.

    ``source_row`` maps each output row to its index in the input matrix
    (-1 for synthetic rows). Synthetic rows record the two parent input rows
    they interpolate between (``parent_a`` is the base row).
    """

    X: np.ndarray
    y: np.ndarray
    synthetic: np.ndarray
    source_row: np.ndarray
    parent_a: np.ndarray
    parent_b: np.ndarray
    method: str

    @property
    def n_rows(self) -> int:
        return int(self.X.shape[0])

    @property
    def n_synthetic(self) -> int:
        return int(np.count_nonzero(self.synthetic))


def nearest_neighbors(X: np.ndarray, k: int) -> np.ndarray:
    """Exact k nearest neighbors of each row among the others.

    (n, k) int64 ordered by (squared distance, row index).
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    return backend.kernels().knn_self(X, k)


def _classes(y: np.ndarray) -> tuple[int, int]:
    """(minority_label, majority_label)."""
    pos = int(np.count_nonzero(y == 1))
    neg = int(np.count_nonzero(y == 0))
    if pos + neg != y.shape[0]:
        raise ValueError("labels must be 0/1")
    if pos == 0 or neg == 0:
        raise ValueError("resampling needs both classes present")
    return (1, 0) if pos <= neg else (0, 1)


def _organic(X: np.ndarray, y: np.ndarray, keep_idx: np.ndarray, method: str) -> ResampledSet:
    keep_idx = np.asarray(keep_idx, dtype=np.int64)
    n = keep_idx.shape[0]
    return ResampledSet(
        X=np.ascontiguousarray(X[keep_idx]),
        y=y[keep_idx].astype(np.int64),
        synthetic=np.zeros(n, dtype=bool),
        source_row=keep_idx.copy(),
        parent_a=np.full(n, -1, dtype=np.int64),
        parent_b=np.full(n, -1, dtype=np.int64),
        method=method,
    )


def none_resample(X: np.ndarray, y: np.ndarray) -> ResampledSet:
    """Identity pass-through, for a uniform pipeline."""
    return _organic(X, y, np.arange(y.shape[0], dtype=np.int64), "none")


def rus(X: np.ndarray, y: np.ndarray, rng: np.random.Generator) -> ResampledSet:
    """Random undersampling: keep all minority rows plus an equal-size
    majority sample drawn without replacement; original row order kept."""
    minority, majority = _classes(y)
    min_idx = np.nonzero(y == minority)[0]
    maj_idx = np.nonzero(y == majority)[0]
    chosen = rng.choice(maj_idx, size=min_idx.size, replace=False)
    keep = np.sort(np.concatenate([min_idx, chosen]))
    return _organic(X, y, keep, "rus")


def smote(
    X: np.ndarray, y: np.ndarray, rng: np.random.Generator, k: int = 5
) -> ResampledSet:
    """Synthetic minority oversampling until the classes balance.

    Each synthetic row interpolates x_new = x + u * (x_nn - x) between a
    uniformly drawn minority base row and one of its k nearest minority
    neighbors, with one uniform u in [0, 1) shared across coordinates.
    Draw order: base rows, then neighbor choices, then u. ``k`` is capped at
    minority_count - 1. Output is the original rows (original order)
    followed by the synthetic rows.
    """
    minority, majority = _classes(y)
    min_idx = np.nonzero(y == minority)[0]
    maj_idx = np.nonzero(y == majority)[0]
    n_syn = maj_idx.size - min_idx.size
    if n_syn == 0:
        return _organic(X, y, np.arange(y.shape[0], dtype=np.int64), "smote")
    if min_idx.size < 2:
        raise ValueError("synthetic oversampling needs at least 2 minority rows")
    k_eff = min(k, min_idx.size - 1)
    X = np.ascontiguousarray(X, dtype=np.float64)
    X_min = np.ascontiguousarray(X[min_idx])
    nn = backend.kernels().knn_self(X_min, k_eff)
    base = rng.integers(0, min_idx.size, size=n_syn)
    pick = rng.integers(0, k_eff, size=n_syn)
    u = rng.random(n_syn)
    nbr = nn[base, pick]
    Xb = X_min[base]
    X_syn = Xb + u[:, None] * (X_min[nbr] - Xb)
    n_org = y.shape[0]
    out = ResampledSet(
        X=np.ascontiguousarray(np.vstack([X, X_syn])),
        y=np.concatenate([y.astype(np.int64), np.full(n_syn, minority, dtype=np.int64)]),
        synthetic=np.r_[np.zeros(n_org, dtype=bool), np.ones(n_syn, dtype=bool)],
        source_row=np.r_[np.arange(n_org, dtype=np.int64), np.full(n_syn, -1, dtype=np.int64)],
        parent_a=np.r_[np.full(n_org, -1, dtype=np.int64), min_idx[base]],
        parent_b=np.r_[np.full(n_org, -1, dtype=np.int64), min_idx[nbr]],
        method="smote",
    )
    return out


def enn_keep_mask(X: np.ndarray, y: np.ndarray, k: int = 3) -> np.ndarray:
    """Edited-nearest-neighbor keep mask.

    A row is removed when a strict majority of its k nearest neighbors
    (self excluded) carries a different label. Decisions are computed on the
    full input, then applied at once; both classes are eligible.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y)
    nn = backend.kernels().knn_self(X, k)
    differs = y[nn] != y[:, None]
    return ~(differs.sum(axis=1) * 2 > k)


def enn(X: np.ndarray, y: np.ndarray, k: int = 3) -> ResampledSet:
    """Edited-nearest-neighbor cleaning of a plain (non-synthetic) set."""
    keep = np.nonzero(enn_keep_mask(X, y, k))[0]
    return _organic(X, y, keep, "enn")


def smoteenn(
    X: np.ndarray,
    y: np.ndarray,
    rng: np.random.Generator,
    k_smote: int = 5,
    k_enn: int = 3,
) -> ResampledSet:
    """SMOTE followed by ENN cleaning of the combined set.

    The output need not be balanced: cleaning removes rows of both classes.
    Provenance is composed, so surviving synthetic rows keep their parents.
    """
    s = smote(X, y, rng, k=k_smote)
    keep = np.nonzero(enn_keep_mask(s.X, s.y, k_enn))[0]
    return ResampledSet(
        X=np.ascontiguousarray(s.X[keep]),
        y=s.y[keep],
        synthetic=s.synthetic[keep],
        source_row=s.source_row[keep],
        parent_a=s.parent_a[keep],
        parent_b=s.parent_b[keep],
        method="smoteenn",
    )


def resample(
    method: str,
    X: np.ndarray,
    y: np.ndarray,
    seed: int = 0,
    k_smote: int = 5,
    k_enn: int = 3,
) -> ResampledSet:
    """Dispatch by method name with a per-(method, seed) generator."""
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if method == "none":
        return none_resample(X, y)
    rng = np.random.Generator(np.random.PCG64(derive_seed(seed, "resample", method)))
    if method == "rus":
        return rus(X, y, rng)
    if method == "smote":
        return smote(X, y, rng, k=k_smote)
    return smoteenn(X, y, rng, k_smote=k_smote, k_enn=k_enn)
