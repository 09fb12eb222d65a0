"""Places of Q and normalized absolute values.

Over Q there is the archimedean place and one place per prime p, with
|p|_p = 1/p.  Absolute values of rationals are exact at every place.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .primes import is_prime, valuation

_F = Fraction


@dataclass(frozen=True)
class Place:
    """The archimedean place (prime == 0) or the p-adic place at a prime."""

    prime: int = 0

    def __post_init__(self):
        if self.prime and not is_prime(self.prime):
            raise DomainError(f"{self.prime} is not prime")

    @staticmethod
    def archimedean() -> "Place":
        return Place(0)

    @staticmethod
    def finite(p: int) -> "Place":
        if p < 2:
            raise DomainError("finite place needs a prime")
        return Place(p)

    @staticmethod
    def parse(s: str) -> "Place":
        s = s.strip().lower()
        if s in ("inf", "oo", "infinity", "archimedean"):
            return Place.archimedean()
        return Place.finite(int(s))

    def is_archimedean(self) -> bool:
        return self.prime == 0

    def __str__(self):
        return "inf" if self.is_archimedean() else str(self.prime)

    def __repr__(self):
        return f"Place({self})"


def abs_value(v: Place, x) -> Fraction:
    """|x|_v as an exact rational (archimedean: usual absolute value)."""
    x = _F(x)
    if x == 0:
        return _F(0)
    if v.is_archimedean():
        return abs(x)
    p = v.prime
    val = valuation(x.numerator, p) - valuation(x.denominator, p)
    return _F(1, p**val) if val >= 0 else _F(p ** (-val))
