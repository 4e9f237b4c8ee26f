"""Reproducible random streams.

Every stream is a Philox (counter-based) generator keyed by the top-level seed plus a
tuple of labels, so a given (seed, labels) pair always yields the same numbers no matter
which other streams were created before it or on which thread.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _label_code(label) -> int:
    if isinstance(label, (int, np.integer)):
        return int(label) & _MASK64
    digest = hashlib.blake2b(str(label).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def seed_sequence(seed: int, *labels) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=int(seed) & _MASK64,
                                  spawn_key=tuple(_label_code(x) for x in labels))


def substream(seed: int, *labels) -> np.random.Generator:
    """Independent generator for the substream identified by ``labels``."""
    return np.random.Generator(np.random.Philox(seed_sequence(seed, *labels)))


def derive_seed(seed: int, *labels) -> int:
    """A 64-bit integer seed for the labelled substream, for APIs that take plain seeds."""
    return int(seed_sequence(seed, *labels).generate_state(1, np.uint64)[0])
