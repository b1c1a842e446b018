"""Seeded, splittable random streams.

All randomness flows from one integer seed. Named sub-streams are derived by
hashing the seed together with a sequence of string/int keys, so the stream
used for, say, graph 17 of an experiment never depends on how many other
streams were created before it.
"""
from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def derive_seed(seed: int, *keys: str | int) -> int:
    """Return a 64-bit seed derived from ``seed`` and ``keys``."""
    h = hashlib.sha256()
    h.update(str(int(seed) & _MASK64).encode())
    for key in keys:
        h.update(b"\x1f")
        h.update(f"{type(key).__name__}:{key}".encode())
    return int.from_bytes(h.digest()[:8], "little")


def derive_rng(seed: int, *keys: str | int) -> np.random.Generator:
    """PCG64 generator for the named stream ``(seed, *keys)``."""
    return np.random.default_rng(np.random.SeedSequence(derive_seed(seed, *keys)))


def as_generator(rng: np.random.Generator | np.random.SeedSequence | int
                 ) -> np.random.Generator:
    """Normalize a Generator, SeedSequence or integer seed to a Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, np.random.SeedSequence):
        return np.random.default_rng(rng)
    if rng is None or isinstance(rng, bool):
        raise TypeError("an explicit seed or numpy Generator is required")
    if isinstance(rng, (int, np.integer)):
        return np.random.default_rng(np.random.SeedSequence(int(rng) & _MASK64))
    raise TypeError(f"expected a Generator, SeedSequence or int seed, got {type(rng)}")


def root_seed(rng: np.random.Generator | np.random.SeedSequence | int) -> int:
    """Integer root for chunked sampling: ints pass through, generators draw one."""
    if isinstance(rng, (int, np.integer)) and not isinstance(rng, bool):
        return int(rng) & _MASK64
    return int(as_generator(rng).integers(0, 1 << 63))
