"""SplitMix64 and the Fisher-Yates shuffle used for train/test splits.

Both are specified down to the bit so that a split can be reproduced by any
implementation from ``(seed, run_index)``:

* ``next()`` advances the 64-bit state by 0x9E3779B97F4A7C15 and returns the
  standard SplitMix64 finaliser of the new state.
* The stream for run ``r`` of seed ``s`` starts from state
  ``mix(mix(s) ^ r)``, where ``mix(v)`` is the first output of a generator
  whose state is ``v``.
* ``below(n)`` rejects outputs ``>= 2**64 - (2**64 mod n)`` and returns the
  remainder mod ``n``.
* ``permutation(n)`` starts from ``[0, ..., n-1]`` and for ``i = n-1 .. 1``
  swaps position ``i`` with ``below(i + 1)``.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & _MASK

    def next(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next()
            if x < limit:
                return x % n

    def permutation(self, n: int) -> list[int]:
        perm = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        return perm


def mix(value: int) -> int:
    return SplitMix64(value).next()


def stream(seed: int, index: int) -> SplitMix64:
    """Independent generator for one ``(seed, index)`` cell."""
    return SplitMix64(mix(mix(seed) ^ (index & _MASK)))
