"""SplitMix64: a small, portable, seeded pseudo-random generator.

The generator is the SplitMix64 algorithm of Steele, Lea and Flood
(published as the seeding generator of the xoshiro family and as
java.util.SplittableRandom). It is used for every stochastic step in the
toolkit (bootstrap resampling, per-split feature subsets) so that results
are bit-reproducible across platforms and independent of any library's
RNG internals.

Reproducibility contract, frozen by golden tests:

* state update: ``state += 0x9E3779B97F4A7C15`` (mod 2^64), output is the
  SplitMix64 finalizer of the new state;
* bounded integers in ``[0, n)`` use the multiply-shift reduction
  ``(u64 * n) >> 64``;
* feature subsets of size k are the first k entries of a Fisher-Yates
  shuffle driven by the stream, returned in ascending order;
* ensemble stream splitting: the master stream is seeded with the user
  seed, and tree i uses a fresh SplitMix64 seeded with the (i+1)-th
  output of the master stream.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """A SplitMix64 stream seeded with a 64-bit integer."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix(self._state)

    def next_below(self, n: int) -> int:
        """A near-uniform integer in ``[0, n)`` (multiply-shift reduction)."""
        if n <= 0:
            raise ValueError("bound must be positive")
        return (self.next_uint64() * n) >> 64

    def integers_below(self, n: int, size: int) -> list[int]:
        return [self.next_below(n) for _ in range(size)]

    def subset(self, population: int, k: int) -> list[int]:
        """k distinct indices from ``range(population)``, ascending.

        Drawn without replacement via a partial Fisher-Yates shuffle; the
        stream advances by exactly k draws.
        """
        if not 0 < k <= population:
            raise ValueError(f"need 0 < k <= population, got k={k}, population={population}")
        pool = list(range(population))
        for i in range(k):
            j = i + self.next_below(population - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])
