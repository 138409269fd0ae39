"""Fixed 64-bit PRNG for reproducible splits and synthetic data.

The generator is splitmix64 (the output mixer of Vigna's xorshift
derivation; constants 0x9E3779B97F4A7C15, 0xBF58476D1CE4E5B9,
0x94D049BB133111EB).  It is tiny and unambiguous, so a reimplementation
in any language reproduces the exact same permutations.  Splittable
seeding for repeated experiments: the initial state is
seed XOR (repeat_index * 0x9E3779B97F4A7C15), all mod 2^64.
"""

from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, state: int):
        self._state = state & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform in [0, 1): top 53 bits over 2^53."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def normal_pair(self) -> tuple[float, float]:
        """Two independent standard normals (Box-Muller)."""
        u1 = (self.next_u64() + 1) * 2.0 ** -64  # (0, 1]: log never sees 0
        u2 = self.uniform()
        radius = math.sqrt(-2.0 * math.log(u1))
        angle = 2.0 * math.pi * u2
        return radius * math.cos(angle), radius * math.sin(angle)

    def permutation(self, n: int) -> np.ndarray:
        """Fisher-Yates shuffle of range(n); swap index is next_u64() mod (i+1)."""
        idx = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.next_u64() % (i + 1)
            idx[i], idx[j] = idx[j], idx[i]
        return np.array(idx, dtype=np.intp)


def split_stream(seed: int, repeat_index: int) -> SplitMix64:
    """Independent stream for (seed, repeat_index)."""
    return SplitMix64(seed ^ (repeat_index * _GOLDEN))
