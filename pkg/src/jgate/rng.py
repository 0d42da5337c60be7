"""SplitMix64: the deterministic generator behind the sampling sweep.

The CSV sampler promises byte-identical output for identical configs,
reproducible from any language.  SplitMix64 (Steele, Lea, Flood 2014;
the generator behind Java's SplittableRandom) is small enough to pin
exactly, so the full stream contract is spelled out here:

state update and output, all in 64-bit unsigned arithmetic:

    state  = (state + 0x9E3779B97F4A7C15) mod 2^64
    z      = state
    z      = ((z XOR (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z      = ((z XOR (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output = z XOR (z >> 31)

uniform doubles take the top 53 bits:  u = (output >> 11) * 2^-53,
giving u in [0, 1).  Splitting a child generator seeds it with the next
raw 64-bit output of the parent.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """64-bit shift-mix generator with splittable seeding."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform in [0, 1), 53 significant bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def next_unit_positive(self) -> float:
        """Uniform in (0, 1]: 1 - next_float()."""
        return 1.0 - self.next_float()

    def split(self) -> "SplitMix64":
        """Child generator seeded by this generator's next raw output."""
        return SplitMix64(self.next_u64())
