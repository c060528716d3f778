"""Deterministic PRNG used for table permutations.

Permutation seeds must reproduce bit-identically everywhere, including in
re-implementations of this toolkit in other languages, so we use splitmix64
(Steele, Lea & Flood's SplittableRandom update function, the same generator
used to seed the xoshiro family) rather than a platform RNG.  The constants
below are the published ones:

    gamma     0x9E3779B97F4A7C15
    mix mul 1 0xBF58476D1CE4E5B9
    mix mul 2 0x94D049BB133111EB

Bounded draws use rejection sampling, so shuffles are exactly uniform.
"""

from __future__ import annotations

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """splitmix64 stream seeded with a 64-bit integer."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        """Next raw 64-bit output."""
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection sampling (no modulo bias)."""
        if n <= 0:
            raise ValueError(f"bound must be positive, got {n}")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            draw = self.next_u64()
            if draw < limit:
                return draw % n

    def shuffled_range(self, n: int) -> tuple[int, ...]:
        """Uniform permutation of range(n) by a backward Fisher-Yates pass."""
        items = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.next_below(i + 1)
            items[i], items[j] = items[j], items[i]
        return tuple(items)
