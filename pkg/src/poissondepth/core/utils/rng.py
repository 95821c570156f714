"""Seeded, named random streams.

Every stochastic operation draws from its own PCG64 stream keyed by (seed, name), so
adding a draw to one operation never shifts the numbers another operation sees.
"""

import numpy as np

from poissondepth.core.utils.hashing import stream_id


def make_rng(seed: int, stream: str) -> np.random.Generator:
    """Generator for the named stream of a seed."""
    sequence = np.random.SeedSequence(int(seed), spawn_key=(stream_id(stream),))
    return np.random.Generator(np.random.PCG64(sequence))
