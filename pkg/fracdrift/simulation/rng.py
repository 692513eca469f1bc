"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
from dataclasses import dataclass

import numpy as np

from ..exceptions import DomainError

_U64_MAX = 2 ** 64 - 1


@dataclass(frozen=True)
class RngSeed:
    """Seed of an independent random stream.

    Streams with the same seed and different stream ids are statistically
    independent; identical (seed, stream_id) pairs reproduce bit-identical
    draws.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise DomainError(f"{name} must be an integer, got {v!r}")
            if not 0 <= v <= _U64_MAX:
                raise DomainError(
                    f"{name} must be an unsigned 64-bit integer, got {v}")
            object.__setattr__(self, name, int(v))

    def spawn(self, stream_id: int) -> "RngSeed":
        return RngSeed(self.seed, stream_id)

    def generator(self) -> np.random.Generator:
        """Return a counter-based generator keyed by (seed, stream_id)."""
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(ss))
