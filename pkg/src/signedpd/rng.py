"""Deterministic 64-bit random number generator (splitmix64).

Every stochastic component of the package draws from this one algorithm so
that trajectories replay bit-identically across platforms, releases and
kernel backends (the compiled kernel carries a C clone of the same three
lines of arithmetic).

Algorithm (Steele, Lea & Flood's SplitMix, 64-bit variant): the state is a
Weyl sequence with increment 0x9E3779B97F4A7C15; each output is the state
passed through a two-round xor-multiply finalizer.  Derived draws:

* ``next_u64``    -- raw 64-bit output.
* ``next_double`` -- top 53 bits scaled to [0, 1).
* ``next_below``  -- unbiased integer in [0, n) by rejecting the first
  ``2**64 mod n`` raw values and reducing modulo n.

The derivations above are part of the contract: changing any of them would
silently re-map every seed.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_WEYL = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Seeded generator; the single source of randomness for a run."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _WEYL) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_double(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def next_below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        reject = (1 << 64) % n
        while True:
            x = self.next_u64()
            if x >= reject:
                return x % n

    def clone(self) -> "SplitMix64":
        c = SplitMix64(0)
        c.state = self.state
        return c


def derive_seeds(seed: int, n: int) -> list[int]:
    """Expand one user-facing seed into n independent stream seeds.

    Used to decouple network construction from run dynamics: both are
    reproducible from the single configured seed without sharing a stream.
    """
    g = SplitMix64(seed)
    return [g.next_u64() for _ in range(n)]
