"""Deterministic seed derivation for reproducible Monte Carlo runs.

Every randomized operation takes an explicit master seed. Sub-streams are
derived from (master seed, key, key, ...) through numpy's SeedSequence
spawn keys, so a cell's random numbers depend only on its coordinates and
never on thread count or execution order.
"""

from __future__ import annotations

import numpy as np


def _sequence(seed: int, keys: tuple[int, ...]) -> np.random.SeedSequence:
    if seed < 0:
        raise ValueError(f"Seeds must be non-negative, got {seed}")
    if any(k < 0 for k in keys):
        raise ValueError(f"Seed keys must be non-negative, got {keys}")
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))


def derive_seed(seed: int, *keys: int) -> int:
    """Derive a 64-bit integer seed from a master seed and integer keys.

    Args:
        seed: Non-negative master seed
        *keys: Non-negative coordinates of the sub-stream (e.g. n, rep)

    Returns:
        Integer seed in [0, 2^64)

    Example:
        >>> derive_seed(0, 250, 3) == derive_seed(0, 250, 3)
        True
    """
    state = _sequence(seed, keys).generate_state(1, dtype=np.uint64)
    return int(state[0])


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Create a PCG64 generator for the sub-stream (seed, *keys)."""
    return np.random.default_rng(_sequence(seed, keys))
