"""Deterministic RNG substreams derived from a single master seed."""

from __future__ import annotations

import zlib

import numpy as np


def _key_to_int(key) -> int:
    if isinstance(key, (int, np.integer)):
        if key < 0:
            raise ValueError(f"seed keys must be nonnegative, got {key}")
        return int(key)
    if isinstance(key, str):
        return zlib.crc32(key.encode("utf-8"))
    raise TypeError(f"seed key must be int or str, got {type(key).__name__}")


def substream(master_seed: int, *keys) -> np.random.Generator:
    """Generator for the substream identified by (master_seed, *keys).

    Same master seed and key path always gives the same stream; distinct
    key paths give statistically independent streams.
    """
    entropy = [_key_to_int(master_seed)] + [_key_to_int(k) for k in keys]
    return np.random.default_rng(np.random.SeedSequence(entropy))
