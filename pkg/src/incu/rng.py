"""Reproducible random-number substreams.

Every stochastic routine in the package draws from a ``numpy.random.Generator``
derived from an :class:`RngStream`, which names a substream by a master seed
plus a path of ``(label, index)`` pairs.  The derivation is fixed:

    SeedSequence(master_seed, spawn_key=(crc32(label_0), index_0,
                                         crc32(label_1), index_1, ...))

feeding a PCG64 bit generator.  Distinct paths yield statistically
independent streams, and the mapping from (seed, path) to the bit stream
does not depend on process scheduling, thread counts, or platform.  (Bit
streams are stable for a fixed numpy version; numpy has kept PCG64 stable
since its introduction.)
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

__all__ = ["RngStream"]


def _encode_path(path):
    key = []
    for label, index in path:
        key.append(zlib.crc32(label.encode("utf-8")))
        key.append(int(index))
    return tuple(key)


@dataclass(frozen=True)
class RngStream:
    """A named, reproducible random substream.

    Parameters
    ----------
    master_seed : int
        64-bit unsigned master seed owned by the composition root.
    path : tuple of (str, int)
        Substream address relative to the master seed.
    """

    master_seed: int
    path: tuple = field(default=())

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")

    def child(self, label: str, index: int = 0) -> "RngStream":
        """Derive the substream addressed by appending ``(label, index)``."""
        return RngStream(self.master_seed, self.path + ((label, int(index)),))

    def generator(self) -> np.random.Generator:
        """Instantiate the numpy Generator for this substream."""
        seq = np.random.SeedSequence(self.master_seed,
                                     spawn_key=_encode_path(self.path))
        return np.random.Generator(np.random.PCG64(seq))

    def seed_record(self) -> dict:
        """Serializable provenance of this substream."""
        return {"master_seed": int(self.master_seed),
                "path": [[label, index] for label, index in self.path]}


def as_stream(seed_or_stream) -> RngStream:
    """Coerce an integer seed or an existing stream to an RngStream."""
    if isinstance(seed_or_stream, RngStream):
        return seed_or_stream
    return RngStream(int(seed_or_stream))
