"""Deterministic seed derivation.

Every random draw in the package comes from a ``numpy.random.Generator``
seeded through :func:`derive_seed`, which mixes a master seed with string
labels via splitmix64. Python's builtin ``hash`` is salted per process, so it
cannot be used here; splitmix64 is stable across processes and platforms.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    """Advance one splitmix64 step; returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    z = z ^ (z >> 31)
    return state, z


def derive_seed(master: int, *labels: str | int) -> int:
    """Derive a 64-bit seed from a master seed and a label path.

    Feeds each label's UTF-8 bytes (or integer value) through a splitmix64
    chain. Different label paths give independent streams; the same path
    always gives the same seed.
    """
    state = master & _MASK
    state, _ = splitmix64(state)
    for label in labels:
        if isinstance(label, int):
            state, _ = splitmix64(state ^ (label & _MASK))
        else:
            for byte in label.encode("utf-8"):
                state, _ = splitmix64(state ^ byte)
        # separator step so ("ab",) and ("a", "b") differ
        state, _ = splitmix64(state ^ 0xA5A5A5A5A5A5A5A5)
    _, out = splitmix64(state)
    return out


def generator(master: int, *labels: str | int) -> np.random.Generator:
    """PCG64 generator for the given label path."""
    return np.random.Generator(np.random.PCG64(derive_seed(master, *labels)))
