"""
UCERT - Seed derivation

All randomness flows from one root seed. Sub-streams are addressed by a path of
labels (command -> module -> trial); each label becomes one word of a numpy
SeedSequence spawn key, so a sub-stream never depends on how many siblings were
drawn before it. Streams use the PCG64 bit generator.
"""

import zlib
from typing import Union

import numpy as np

SeedLabel = Union[int, str]

SEED_MASK = (1 << 64) - 1


def _label_word(label: SeedLabel) -> int:
    if isinstance(label, (int, np.integer)):
        if label < 0:
            raise ValueError(f"Seed labels must be non-negative, got {label}")
        return int(label)
    # crc32 is stable across platforms and interpreter runs (hash() is not)
    return zlib.crc32(str(label).encode("utf-8"))


def seed_sequence(seed: int, *path: SeedLabel) -> np.random.SeedSequence:
    """SeedSequence for the sub-stream addressed by ``path`` under ``seed``."""
    return np.random.SeedSequence(
        entropy=int(seed) & SEED_MASK,
        spawn_key=tuple(_label_word(p) for p in path)
    )


def make_rng(seed: int, *path: SeedLabel) -> np.random.Generator:
    """
    Build a reproducible generator for a sub-stream.

    Example:
        >>> rng = make_rng(1234, "montecarlo", 0, 17)
        >>> rng.integers(0, 10, size=3)
    """
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, *path)))


def derive_seed(seed: int, *path: SeedLabel) -> int:
    """Derive a 64-bit integer seed for a sub-stream."""
    state = seed_sequence(seed, *path).generate_state(2, dtype=np.uint32)
    return int(state[0]) | (int(state[1]) << 32)
