"""Reproducible per-replica random streams.

A stream is identified by ``(master_seed, stream_index)``. The pair is mixed
into a 64-bit seed with the splitmix64 finaliser and handed to numpy's PCG64,
so the draws of replica ``r`` never depend on how replicas are scheduled.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

#: stream reserved for sampling a shared ``bernoulli:p`` initial state
INIT_STREAM = 1 << 63


def splitmix64(x: int) -> int:
    z = (x + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, stream_index: int) -> int:
    """64-bit seed for stream ``stream_index`` of ``master_seed``."""
    base = splitmix64(int(master_seed) & MASK64)
    return splitmix64((base + (int(stream_index) & MASK64) * GOLDEN) & MASK64)


def stream(master_seed: int, stream_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(master_seed, stream_index)))
