"""Deterministic, platform-independent random number generation.

Everything random in the toolkit (graph sampling, natural frequencies,
initial conditions, seed derivation for sweeps) flows through SplitMix64,
a tiny counter-based generator with a documented algorithm:

    state <- state + 0x9E3779B97F4A7C15            (mod 2^64)
    z <- state
    z <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9      (mod 2^64)
    z <- (z ^ (z >> 27)) * 0x94D049BB133111EB      (mod 2^64)
    output = z ^ (z >> 31)

The same seed therefore reproduces the same draws on any platform or
language, which is what makes run hashes and cross-implementation
comparisons meaningful.  numpy's generators are deliberately not used
here: their bit streams are version-dependent implementation details.

Uniform doubles take the top 53 bits of one output word; normal deviates
use the Box-Muller transform on two output words.  Run metadata records
``ALGORITHM`` alongside the seeds.
"""

from __future__ import annotations

import math

import numpy as np

ALGORITHM = "splitmix64"

_MASK = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV_2_53 = 2.0 ** -53


class SplitMix64:
    """SplitMix64 stream seeded with a 64-bit unsigned integer."""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError("seed must be a nonnegative 64-bit integer")
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _M1) & _MASK
        z = ((z ^ (z >> 27)) * _M2) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """One double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _INV_2_53

    def uniforms(self, n: int) -> np.ndarray:
        return np.array([self.uniform() for _ in range(n)], dtype=np.float64)

    def uniform_range(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.uniform()

    def normal(self) -> float:
        """One standard normal deviate (Box-Muller, two words consumed)."""
        # (u1 in (0,1]) so log() is finite; u2 in [0,1)
        u1 = ((self.next_u64() >> 11) + 1) * _INV_2_53
        u2 = (self.next_u64() >> 11) * _INV_2_53
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def normals(self, n: int, mean: float = 0.0, std: float = 1.0) -> np.ndarray:
        return np.array(
            [mean + std * self.normal() for _ in range(n)], dtype=np.float64
        )


def derive_seed(master: int, index: int) -> int:
    """Deterministic child seed: the (index+1)-th output of a SplitMix64
    stream seeded at ``master``.  Used to give each sweep run / seed field
    its own independent stream."""
    if index < 0:
        raise ValueError("index must be nonnegative")
    stream = SplitMix64(master)
    out = 0
    for _ in range(index + 1):
        out = stream.next_u64()
    return out
