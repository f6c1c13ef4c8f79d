"""Seeded random stream used by the coefficient generators.

The algorithm is fixed so that a seed reproduces the same coefficients on
any platform with IEEE doubles:

* raw words come from SplitMix64: the 64-bit state is advanced by the
  constant ``0x9E3779B97F4A7C15`` and each new state is passed through the
  finaliser ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
  z *= 0x94D049BB133111EB; z ^= z >> 31`` (all arithmetic mod 2**64);
* a uniform double in ``(0, 1]`` is ``((word >> 11) + 1) * 2**-53``;
* standard normals use the Box-Muller transform on two consecutive uniforms
  ``u1, u2``: ``r = sqrt(-2 ln u1)`` gives ``r cos(2 pi u2)`` first and
  ``r sin(2 pi u2)`` on the following call.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int = 0):
        if not 0 <= int(seed) <= _MASK:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = int(seed)
        self._state = int(seed)
        self._spare: float | None = None

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in (0, 1]."""
        return ((self.next_u64() >> 11) + 1) * (1.0 / 9007199254740992.0)

    def normal(self) -> float:
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        u1 = self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        self._spare = r * math.sin(2.0 * math.pi * u2)
        return r * math.cos(2.0 * math.pi * u2)

    def normals(self, count: int) -> list[float]:
        return [self.normal() for _ in range(count)]


def make_rng(seed_or_rng: int | SplitMix64) -> SplitMix64:
    if isinstance(seed_or_rng, SplitMix64):
        return seed_or_rng
    return SplitMix64(seed_or_rng)
