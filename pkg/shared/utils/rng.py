"""
Counter-based random streams

Every draw in a run is keyed by (master_seed, stream_id, trial_index), so a
trial can be regenerated on its own and in any order.
"""

from typing import Union

import numpy as np

from ..config.constants import RNG_STREAMS, ANTENNA_STREAM_STRIDE


def stream_id(stream: Union[str, int], antenna: int = 0) -> int:
    """Resolve a named stream to its integer id, offset per antenna"""
    base = RNG_STREAMS[stream] if isinstance(stream, str) else int(stream)
    return base + ANTENNA_STREAM_STRIDE * int(antenna)


def make_rng(seed: int, stream: Union[str, int] = 0, trial: int = 0, antenna: int = 0) -> np.random.Generator:
    """Philox generator for one (seed, stream, trial) cell"""
    sequence = np.random.SeedSequence([int(seed), stream_id(stream, antenna), int(trial)])
    return np.random.Generator(np.random.Philox(sequence))


def derive_seed(seed: int, stream: Union[str, int] = 0, trial: int = 0, antenna: int = 0) -> int:
    """Collapse a (seed, stream, trial) cell into one 63-bit integer seed"""
    sequence = np.random.SeedSequence([int(seed), stream_id(stream, antenna), int(trial)])
    return int(sequence.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
