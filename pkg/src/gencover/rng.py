"""Counter-based randomness: every (seed, stream) pair gets its own Philox4x64 stream.

The generator is numpy's Philox4x64-10 keyed with the 64-bit seed.  Stream
``k`` starts at counter (0, 0, 0, k), so the top counter word separates
streams and draws within a stream advance only the low words.  A trial's
randomness therefore depends on (seed, trial index) alone and never on how
trials are scheduled across workers.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


def stream(seed: int, index: int) -> np.random.Generator:
    bitgen = np.random.Philox(key=seed & MASK64, counter=[0, 0, 0, index & MASK64])
    return np.random.Generator(bitgen)


def partial_shuffle(gen: np.random.Generator, size: int, k: int) -> np.ndarray:
    """First k entries of a Fisher-Yates shuffle of range(size): a uniform k-subset, in draw order."""
    if not 0 <= k <= size:
        raise ValueError(f"cannot draw {k} items from {size}")
    pool = np.arange(size, dtype=np.int64)
    for i in range(k):
        j = i + int(gen.integers(size - i))
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:k].copy()
