"""Deterministic random-stream management.

All randomness in the simulator flows through numpy's PCG64 generator,
seeded with 64-bit integers. Reproducibility rules:

* every public operation that draws random numbers takes an explicit seed;
* Monte-Carlo trials get child seeds ``(master_seed + trial_index) mod 2**64``,
  so trial k is reproducible in isolation;
* within one trial, decorrelated sub-streams (network, sheets, shock pick)
  are derived with ``split_seed(trial_seed, purpose)`` so no two purposes
  ever share a raw stream.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


def validate_seed(seed: int, name: str = "seed") -> int:
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise ValueError(f"{name} must be an integer, got {seed!r}")
    if not 0 <= int(seed) <= MASK64:
        raise ValueError(f"{name} must be a 64-bit unsigned integer, got {seed}")
    return int(seed)


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for a validated 64-bit seed."""
    return np.random.Generator(np.random.PCG64(validate_seed(seed)))


def child_seed(seed: int, index: int) -> int:
    """Child seed for Monte-Carlo trial ``index``: seed + index, wrapping at 64 bits."""
    return (validate_seed(seed) + int(index)) & MASK64


def split_seed(seed: int, *key: int) -> int:
    """Derive a decorrelated 64-bit sub-seed from ``seed`` and an integer key path.

    Uses numpy's SeedSequence spawn-key mechanism, which is a documented,
    version-stable hash. Distinct key paths give independent streams even
    for adjacent seeds.
    """
    ss = np.random.SeedSequence(entropy=validate_seed(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])
