"""Seeded random streams.

A ``RandomSource`` is a (seed, stream) pair. Child streams are derived by
hashing the parent stream id with integer keys through numpy's
``SeedSequence``, so the draws used for, say, block 7 of budget 20 never
depend on how many other blocks exist or which thread runs them.
"""

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RandomSource:
    seed: int
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            value = getattr(self, name)
            if not 0 <= value <= _MASK64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {value}")

    def spawn(self, *keys):
        """Child source; identical keys give identical children."""
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream, *keys))
        child = int(ss.generate_state(1, dtype=np.uint64)[0])
        return RandomSource(self.seed, child)

    def generator(self):
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def uniform(self, shape):
        return self.generator().random(shape)


def as_source(rng):
    """Accept a ``RandomSource`` or a plain integer seed."""
    if isinstance(rng, RandomSource):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RandomSource(int(rng))
    raise TypeError(f"expected RandomSource or int seed, got {type(rng).__name__}")
