"""Portable deterministic pseudo-randomness for reproducible experiments.

The generator is a 64-bit linear congruential generator with Knuth's MMIX
constants,

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2**64,

and uniform doubles take the top 53 bits of the state.  Output depends only
on the seed, never on the platform, hash randomization, or library versions.
``mix64`` derives independent stream seeds from integer/string keys with the
splitmix64 finalizer, so per-cell seeds in a grid are stable regardless of
evaluation order or thread count.
"""

from __future__ import annotations

__all__ = ["Lcg64", "mix64"]

_MASK = (1 << 64) - 1
_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407


class Lcg64:
    """Seeded 64-bit LCG; ``next_unit`` yields doubles in [0, 1)."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = (seed ^ 0x9E3779B97F4A7C15) & _MASK
        self.next_u64()  # decouple the first output from small seeds

    def next_u64(self) -> int:
        self.state = (_LCG_MULT * self.state + _LCG_INC) & _MASK
        return self.state

    def next_unit(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)

    def next_int(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi] (desk-scale ranges)."""
        return lo + self.next_u64() % (hi - lo + 1)


def _splitmix_fold(h: int, v: int) -> int:
    h = (h + v) & _MASK
    h = ((h ^ (h >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    h = ((h ^ (h >> 27)) * 0x94D049BB133111EB) & _MASK
    return h ^ (h >> 31)


def mix64(*keys) -> int:
    """Fold integers and strings into one 64-bit stream seed."""
    h = 0x9E3779B97F4A7C15
    for k in keys:
        if isinstance(k, str):
            for b in k.encode("utf-8"):
                h = _splitmix_fold(h, b + 1)
        else:
            h = _splitmix_fold(h, int(k) & _MASK)
    return h
