"""Deterministic pseudo-random stream used wherever a seed appears.

The generator is SplitMix64 with its published constant set: the state
advances by 0x9E3779B97F4A7C15 per draw and each output is finalized with
the xor-shift-multiply mixer (0xBF58476D1CE4E5B9, 0x94D049BB133111EB).
Integer ranges are drawn by rejection sampling, so the stream, and every
generated instance, schedule, and sample, reproduces bit-for-bit across
platforms and implementations of the same algorithm.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """64-bit counter-based stream; seed fixes the whole sequence."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection from the 64-bit stream."""
        if n <= 0:
            raise ValueError("randbelow needs a positive bound")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def randint(self, a: int, b: int) -> int:
        """Uniform integer in [a, b], both ends inclusive."""
        if a > b:
            raise ValueError(f"empty range [{a}, {b}]")
        return a + self.randbelow(b - a + 1)

    def bernoulli(self, p: float) -> bool:
        """True with probability p, using a fixed 2**64 threshold."""
        if p <= 0.0:
            return False
        if p >= 1.0:
            return True
        return self.next_u64() < int(p * 18446744073709551616.0)

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]
