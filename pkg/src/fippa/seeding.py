"""Deterministic fan-out of one master seed into per-stage sub-seeds.

Every stochastic stage draws its seed from the master seed plus a fixed
integer path (stage code, cluster count, run index, ...).  Changing the
inputs of one stage therefore never perturbs the random stream of
another, and a recorded master seed reproduces every run exactly.
"""

from __future__ import annotations

import numpy as np

STAGE_FEATURE_CLUSTERING = 1
STAGE_FCM = 2
STAGE_STABILITY = 3


def derive_seed(master: int, *path: int) -> int:
    """Derive a sub-seed from `master` and an integer path, deterministically."""
    if master < 0:
        raise ValueError(f"master seed must be >= 0, got {master}")
    seq = np.random.SeedSequence([int(master), *(int(x) for x in path)])
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def generator(seed: int, *path: int) -> np.random.Generator:
    """RNG seeded by `seed` and an optional integer path."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *(int(x) for x in path)]))
