"""Portable deterministic RNG used by every generator in this package.

The platform default RNG is deliberately avoided: instance streams must be
bit-exact across machines, Python versions, and reimplementations in other
languages.  The generator is xoshiro256** (Blackman & Vigna) with its state
expanded from a 64-bit seed by splitmix64, which is the conventional seeding
procedure for the xoshiro family.

All derived draws are specified here so they can be reproduced exactly:

* ``randbelow(n)`` draws 64-bit words and rejects values at the top of the
  range, then reduces modulo ``n`` (unbiased).
* ``random()`` uses the top 53 bits of one word, giving a float in [0, 1).
* ``shuffle`` is a Fisher-Yates pass from the last index down to 1.
* ``sample`` is a partial Fisher-Yates over an index array, front-loaded, so
  the first ``k`` slots are the sample in draw order.

The draw order inside each generator is part of the reproducibility
contract; changing anything in this module invalidates golden files.
"""

from __future__ import annotations

from typing import MutableSequence, Sequence, TypeVar

_MASK64 = (1 << 64) - 1

T = TypeVar("T")


def _splitmix64_next(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class PortableRng:
    """xoshiro256** stream seeded from a single 64-bit value."""

    __slots__ = ("_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int) -> None:
        if not 0 <= seed <= _MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        state = seed
        state, self._s0 = _splitmix64_next(state)
        state, self._s1 = _splitmix64_next(state)
        state, self._s2 = _splitmix64_next(state)
        state, self._s3 = _splitmix64_next(state)

    def next_u64(self) -> int:
        """Return the next 64-bit word of the stream."""
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection sampling."""
        if n <= 0:
            raise ValueError("n must be positive")
        span = _MASK64 + 1
        threshold = span - (span % n)
        while True:
            u = self.next_u64()
            if u < threshold:
                return u % n

    def random(self) -> float:
        """Uniform float in [0, 1) built from the top 53 bits of one word."""
        return (self.next_u64() >> 11) * 2.0**-53

    def choice(self, seq: Sequence[T]) -> T:
        if not seq:
            raise ValueError("cannot choose from an empty sequence")
        return seq[self.randbelow(len(seq))]

    def shuffle(self, items: MutableSequence[T]) -> None:
        """In-place Fisher-Yates shuffle, descending index order."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, seq: Sequence[T], k: int) -> list[T]:
        """Draw k items without replacement; result order is draw order."""
        n = len(seq)
        if not 0 <= k <= n:
            raise ValueError(f"cannot sample {k} items from {n}")
        idx = list(range(n))
        for i in range(k):
            j = i + self.randbelow(n - i)
            idx[i], idx[j] = idx[j], idx[i]
        return [seq[idx[i]] for i in range(k)]
