"""Platform-independent pseudo-random numbers for reproducible splits.

The generator is xorshift64* (Vigna, 2016)::

    x ^= x >> 12
    x ^= x << 25          (mod 2**64)
    x ^= x >> 27
    out = x * 0x2545F4914F6CDD1D   (mod 2**64)

The 64-bit seed is first passed through one SplitMix64 step (increment
0x9E3779B97F4A7C15, multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB)
so that every seed, including 0, yields a nonzero xorshift state.
Bounded integers use rejection sampling, so they carry no modulo bias.
Everything is plain Python integer arithmetic, hence bit-identical on every
platform.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


def _splitmix64(seed: int) -> int:
    z = (seed + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class XorShift64Star:
    """xorshift64* generator seeded through SplitMix64."""

    def __init__(self, seed: int) -> None:
        if not 0 <= seed <= _MASK:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        state = _splitmix64(seed)
        self._state = state if state != 0 else 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x ^= (x << 25) & _MASK
        x ^= x >> 27
        self._state = x
        return (x * 0x2545F4914F6CDD1D) & _MASK

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def permutation(self, n: int) -> list[int]:
        """Fisher-Yates shuffle of ``range(n)``."""
        items = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items
