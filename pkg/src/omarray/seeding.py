"""Deterministic derivation of per-realization random streams.

Monte-Carlo loops derive one independent stream per realization from a
64-bit master seed and the realization counter, so that results do not
depend on chunking or worker count.  The derivation is the SplitMix64
finalizer applied to ``master + (k + 1) * GOLDEN`` (all arithmetic mod
2**64), which is a pure counter hash: stream ``k`` can be reconstructed
in O(1) without generating streams ``0..k-1``.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """SplitMix64 finalizer (public-domain constants)."""
    z = (x + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def stream_seed(master_seed: int, counter: int) -> int:
    """64-bit seed for sub-stream ``counter`` of ``master_seed``."""
    return splitmix64((master_seed + counter * _GOLDEN) & _MASK)


def stream_rng(master_seed: int, counter: int) -> np.random.Generator:
    """Independent generator for one Monte-Carlo realization."""
    return np.random.default_rng(stream_seed(master_seed, counter))
