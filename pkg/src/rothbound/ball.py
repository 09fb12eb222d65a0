"""Rigorous real/complex ball arithmetic over exact rational endpoints.

A RealBall is a closed interval [lo, hi] with Fraction endpoints; the true
value is guaranteed inside.  Field operations are exact interval arithmetic
(no rounding at all), so exact inputs stay exact.  Transcendental maps
(log, sqrt, n-th root) round endpoints outward through mpmath's
directed-rounding kernels; every mpf is a dyadic rational and converts back
to a Fraction without loss.

Comparisons return True / False / None, None meaning the balls overlap and
the verdict is unknown at the current width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from mpmath.libmp import (
    from_man_exp,
    from_rational,
    mpf_div,
    mpf_exp,
    mpf_log,
    mpf_sqrt,
    round_ceiling,
    round_floor,
    to_man_exp,
)

from .errors import DomainError

_F = Fraction


def _to_mpf(x: Fraction, prec: int, rnd):
    return from_rational(x.numerator, x.denominator, prec, rnd)


def _to_fraction(t) -> Fraction:
    # raw libmp mpf: (sign, man, exp, bc) with man >= 0
    sign, man, exp, _bc = t
    man = int(man)
    if sign:
        man = -man
    if exp >= 0:
        return _F(man * (1 << exp))
    return _F(man, 1 << -exp)


def _dir(fn, x: Fraction, prec: int, rnd) -> Fraction:
    """Apply a monotone-increasing mpf map to x with directed rounding."""
    return _to_fraction(fn(_to_mpf(x, prec, rnd), prec, rnd))


@dataclass(frozen=True)
class RealBall:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("inverted interval")

    # -- constructors -------------------------------------------------
    @staticmethod
    def exact(x) -> "RealBall":
        x = _F(x)
        return RealBall(x, x)

    @staticmethod
    def from_midrad(mid, rad) -> "RealBall":
        mid, rad = _F(mid), _F(rad)
        return RealBall(mid - rad, mid + rad)

    @staticmethod
    def coerce(x) -> "RealBall":
        if isinstance(x, RealBall):
            return x
        if isinstance(x, Rational):
            return RealBall.exact(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to RealBall")

    # -- basic queries -------------------------------------------------
    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def rad(self) -> Fraction:
        return (self.hi - self.lo) / 2

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        x = _F(x)
        return self.lo <= x <= self.hi

    def contains_ball(self, other: "RealBall") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self):
        if self.is_exact():
            return f"RealBall({self.lo})"
        return f"RealBall({float(self.mid):.12g} ± {float(self.rad):.3g})"

    # -- ring operations (exact) ----------------------------------------
    def __add__(self, other):
        o = RealBall.coerce(other)
        return RealBall(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RealBall(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-RealBall.coerce(other))

    def __rsub__(self, other):
        return RealBall.coerce(other) + (-self)

    def __mul__(self, other):
        o = RealBall.coerce(other)
        c = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RealBall(min(c), max(c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RealBall.coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("division by interval containing 0")
        inv = RealBall(1 / o.hi, 1 / o.lo)
        return self * inv

    def __rtruediv__(self, other):
        return RealBall.coerce(other) / self

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RealBall(_F(0), max(-self.lo, self.hi))

    def square(self) -> "RealBall":
        a = abs(self)
        return RealBall(a.lo * a.lo, a.hi * a.hi)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise TypeError("only nonnegative integer powers")
        out = RealBall.exact(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base.square() if k > 1 else base
            k >>= 1
        return out

    # -- rounding control ------------------------------------------------
    def round(self, prec: int) -> "RealBall":
        """Outward-round endpoints to dyadics with ~prec significant bits."""
        lo = _to_fraction(_to_mpf(self.lo, prec, round_floor))
        hi = _to_fraction(_to_mpf(self.hi, prec, round_ceiling))
        return RealBall(lo, hi)

    def hull(self, other: "RealBall") -> "RealBall":
        return RealBall(min(self.lo, other.lo), max(self.hi, other.hi))

    # -- transcendental maps ----------------------------------------------
    def log(self, prec: int = 128) -> "RealBall":
        if self.lo <= 0:
            raise DomainError("log of interval touching (-inf, 0]")
        return RealBall(
            _dir(mpf_log, self.lo, prec, round_floor),
            _dir(mpf_log, self.hi, prec, round_ceiling),
        )

    def exp(self, prec: int = 128) -> "RealBall":
        return RealBall(
            _dir(mpf_exp, self.lo, prec, round_floor),
            _dir(mpf_exp, self.hi, prec, round_ceiling),
        )

    def sqrt(self, prec: int = 128) -> "RealBall":
        if self.lo < 0:
            raise DomainError("sqrt of interval touching negatives")
        if self.is_exact():
            r = _exact_sqrt(self.lo)
            if r is not None:
                return RealBall.exact(r)
        return RealBall(
            _dir(mpf_sqrt, self.lo, prec, round_floor) if self.lo else _F(0),
            _dir(mpf_sqrt, self.hi, prec, round_ceiling),
        )

    def nth_root(self, n: int, prec: int = 128) -> "RealBall":
        if n == 1:
            return self
        if n == 2:
            return self.sqrt(prec)
        if self.lo < 0:
            raise DomainError("n-th root of interval touching negatives")
        if self.is_exact():
            r = _exact_nth_root(self.lo, n)
            if r is not None:
                return RealBall.exact(r)
        if self.lo == 0:
            hi = _root_dir(self.hi, n, prec, round_ceiling)
            return RealBall(_F(0), hi)
        return RealBall(
            _root_dir(self.lo, n, prec, round_floor),
            _root_dir(self.hi, n, prec, round_ceiling),
        )

    # -- three-valued comparisons -----------------------------------------
    def lt(self, other):
        o = RealBall.coerce(other)
        if self.hi < o.lo:
            return True
        if self.lo >= o.hi:
            return False
        return None

    def le(self, other):
        o = RealBall.coerce(other)
        if self.hi <= o.lo:
            return True
        if self.lo > o.hi:
            return False
        return None

    def gt(self, other):
        return RealBall.coerce(other).lt(self)

    def ge(self, other):
        return RealBall.coerce(other).le(self)

    def sign(self):
        """Certain sign of the enclosed value: -1, 0 (exact), +1 or None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None


def _exact_sqrt(x: Fraction):
    if x < 0:
        return None
    if x == 0:
        return _F(0)
    a = math.isqrt(x.numerator)
    b = math.isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return _F(a, b)
    return None


def _int_nth_root(m: int, n: int):
    if m == 0:
        return 0
    r = round(m ** (1.0 / n)) if m.bit_length() < 512 else 1 << (m.bit_length() // n)
    while r**n > m:
        r -= 1
    while (r + 1) ** n <= m:
        r += 1
    return r if r**n == m else None


def _exact_nth_root(x: Fraction, n: int):
    a = _int_nth_root(x.numerator, n)
    if a is None:
        return None
    b = _int_nth_root(x.denominator, n)
    if b is None:
        return None
    return _F(a, b)


def _root_dir(x: Fraction, n: int, prec: int, rnd) -> Fraction:
    # x^(1/n) = exp(log(x)/n); each stage is monotone increasing, so one
    # rounding direction is valid throughout.
    wp = prec + 8
    t = _to_mpf(x, wp, rnd)
    t = mpf_log(t, wp, rnd)
    t = mpf_div(t, from_man_exp(n, 0), wp, rnd)
    t = mpf_exp(t, wp, rnd)
    return _to_fraction(t)


def log_ball(x, prec: int = 128) -> RealBall:
    """Rigorous log of an exact rational or a RealBall."""
    return RealBall.coerce(x).log(prec)


def sqrt_ball(x, prec: int = 128) -> RealBall:
    return RealBall.coerce(x).sqrt(prec)


def ball_sum(items, start=None) -> RealBall:
    acc = start if start is not None else RealBall.exact(0)
    for it in items:
        acc = acc + it
    return acc


@dataclass(frozen=True)
class ComplexBall:
    re: RealBall
    im: RealBall

    @staticmethod
    def exact(re, im=0) -> "ComplexBall":
        return ComplexBall(RealBall.exact(re), RealBall.exact(im))

    @staticmethod
    def coerce(x) -> "ComplexBall":
        if isinstance(x, ComplexBall):
            return x
        if isinstance(x, RealBall):
            return ComplexBall(x, RealBall.exact(0))
        if isinstance(x, Rational):
            return ComplexBall.exact(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to ComplexBall")

    def is_exact(self) -> bool:
        return self.re.is_exact() and self.im.is_exact()

    def __repr__(self):
        return f"ComplexBall({float(self.re.mid):.10g} + {float(self.im.mid):.10g}j)"

    def __add__(self, other):
        o = ComplexBall.coerce(other)
        return ComplexBall(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexBall(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-ComplexBall.coerce(other))

    def __rsub__(self, other):
        return ComplexBall.coerce(other) + (-self)

    def __mul__(self, other):
        o = ComplexBall.coerce(other)
        return ComplexBall(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def conj(self) -> "ComplexBall":
        return ComplexBall(self.re, -self.im)

    def abs2(self) -> RealBall:
        return self.re.square() + self.im.square()

    def __abs__(self) -> RealBall:
        return self.abs2().sqrt()

    def __truediv__(self, other):
        o = ComplexBall.coerce(other)
        d = o.abs2()
        return self * o.conj() * (RealBall.exact(1) / d)

    def __rtruediv__(self, other):
        return ComplexBall.coerce(other) / self

    def round(self, prec: int) -> "ComplexBall":
        return ComplexBall(self.re.round(prec), self.im.round(prec))

    def contains(self, re, im=0) -> bool:
        return self.re.contains(re) and self.im.contains(im)
