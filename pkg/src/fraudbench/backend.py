"""Compute-backend selection.

Hot kernels (tree growth, tree prediction, exact k-NN) exist in two
implementations: a numba ``@njit`` module and a pure-numpy module. Both
produce bit-identical results; the numba one is much faster on large inputs.

Selection order:

1. ``use_backend(name)`` called in-process (tests, benchmarks).
2. The ``FRAUDBENCH_BACKEND`` environment variable (``numba`` or ``numpy``).
3. Default: ``numba`` when importable, else ``numpy``.
"""

from __future__ import annotations

import importlib
import os
from types import ModuleType

ENV_VAR = "FRAUDBENCH_BACKEND"
_VALID = ("numba", "numpy")

_forced: str | None = None
_cache: dict[str, ModuleType] = {}


def _load(name: str) -> ModuleType:
    if name not in _cache:
        if name == "numba":
            _cache[name] = importlib.import_module("fraudbench._kernels_numba")
        else:
            _cache[name] = importlib.import_module("fraudbench._kernels_numpy")
    return _cache[name]


def _numba_available() -> bool:
    try:
        importlib.import_module("numba")
    except ImportError:
        return False
    return True


def available_backends() -> tuple[str, ...]:
    """Names of backends usable in this environment."""
    return _VALID if _numba_available() else ("numpy",)


def current_backend_name() -> str:
    """Resolve the active backend name without importing kernel modules."""
    if _forced is not None:
        return _forced
    env = os.environ.get(ENV_VAR)
    if env:
        if env not in _VALID:
            raise ValueError(
                f"{ENV_VAR} must be one of {_VALID}, got {env!r}"
            )
        if env == "numba" and not _numba_available():
            raise RuntimeError(
                f"{ENV_VAR}=numba requested but numba is not importable"
            )
        return env
    return "numba" if _numba_available() else "numpy"


def use_backend(name: str | None) -> None:
    """Force a backend in-process (overrides the environment variable).

    Pass ``None`` to return to environment/default selection.
    """
    global _forced
    if name is None:
        _forced = None
        return
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    if name == "numba" and not _numba_available():
        raise RuntimeError("numba backend requested but numba is not importable")
    _forced = name


def kernels() -> ModuleType:
    """The active kernel module."""
    return _load(current_backend_name())
