"""Imbalanced binary classification toolkit and benchmark harness.

From-scratch implementations of logistic regression, entropy decision
trees, random forests, and second-order gradient boosting, combined with
training-set resamplers (random undersampling, synthetic minority
oversampling, edited-neighbor cleaning) and rank metrics, plus a fully
seeded benchmark pipeline that crosses every model with every resampler.

Hot kernels run under numba by default with a pure-numpy fallback
(``FRAUDBENCH_BACKEND=numpy`` or :func:`fraudbench.backend.use_backend`);
both backends produce bit-identical results.
"""

from .backend import available_backends, current_backend_name, use_backend
from .boost import BoostedTreesClassifier, gradient_hessian, leaf_weight, split_gain
from .data import (
    Dataset,
    load_csv,
    stratified_kfold,
    stratified_split,
    write_csv,
    zscore_apply,
    zscore_fit,
)
from .linear import LogisticClassifier
from .metrics import (
    ConfusionStats,
    auc_roc,
    average_precision,
    confusion_at,
    pr_curve,
    roc_curve,
)
from .resample import ResampledSet, enn, nearest_neighbors, resample, rus, smote, smoteenn
from .tree import (
    DecisionTreeClassifier,
    RandomForestClassifier,
    best_split,
    entropy,
    information_gain,
)
from .tune import DEFAULT_SPACES, SearchResult, make_model, randomized_search

__version__ = "0.1.0"

__all__ = [
    "BoostedTreesClassifier",
    "ConfusionStats",
    "Dataset",
    "DecisionTreeClassifier",
    "DEFAULT_SPACES",
    "LogisticClassifier",
    "RandomForestClassifier",
    "ResampledSet",
    "SearchResult",
    "auc_roc",
    "available_backends",
    "average_precision",
    "best_split",
    "confusion_at",
    "current_backend_name",
    "enn",
    "entropy",
    "gradient_hessian",
    "information_gain",
    "leaf_weight",
    "load_csv",
    "make_model",
    "nearest_neighbors",
    "pr_curve",
    "randomized_search",
    "resample",
    "roc_curve",
    "rus",
    "smote",
    "smoteenn",
    "split_gain",
    "stratified_kfold",
    "stratified_split",
    "use_backend",
    "write_csv",
    "zscore_apply",
    "zscore_fit",
    "__version__",
]
