"""Counter-based uniform draws shared by the compiled and numpy kernels.

Draw ``j`` of shot ``s`` uses counter ``s * width + j``; its value is the
SplitMix64 finalizer applied to ``key + (counter + 1) * GAMMA`` where
``key = splitmix64(seed)``.  Any shot can be regenerated on its own, so
sharded runs merge to exactly the sequential histogram.
"""

from __future__ import annotations

import os

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1
DEFAULT_SEED = 20260417
SEED_ENV = "PURECODE_SEED"


def splitmix64(z: int) -> int:
    """SplitMix64 output finalizer (no state increment)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_key(seed: int) -> int:
    return splitmix64(int(seed) & MASK64)


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, counters: np.ndarray) -> np.ndarray:
    """Doubles in [0, 1) for an array of 64-bit counters."""
    key = np.uint64(stream_key(seed))
    c = np.asarray(counters, dtype=np.uint64)
    z = key + (c + np.uint64(1)) * np.uint64(GAMMA)
    return (_mix_array(z) >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def uniform(seed: int, counter: int) -> float:
    z = (stream_key(seed) + (counter + 1) * GAMMA) & MASK64
    return (splitmix64(z) >> 11) * (1.0 / (1 << 53))


def default_seed() -> int:
    value = os.environ.get(SEED_ENV)
    if value is None or value.strip() == "":
        return DEFAULT_SEED
    return int(value, 0)
