"""p-adic balls over Q_p, Hensel lifting, and mod-p polynomial utilities.

A PadicBall encodes a Q_p number known to finite precision:

* ``exact_zero``                     -- the number 0;
* ``unit != 0`` -- value in p^val * (unit + p^ndigits Z_p); the valuation
  is certain and equals ``val``;
* ``unit == 0`` -- only the bound |x|_p <= p^-val is known (cancellation
  ate all known digits).

Only Q_p itself is supported; roots living in proper extensions of Q_p are
detected (residue block structure) but not represented.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import PrecisionExhausted
from .primes import valuation as int_valuation


@dataclass(frozen=True)
class PadicBall:
    p: int
    val: int
    unit: int
    ndigits: int
    exact_zero: bool = False

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero(p: int) -> "PadicBall":
        return PadicBall(p, 0, 0, 0, exact_zero=True)

    @staticmethod
    def from_rational(x, p: int, ndigits: int) -> "PadicBall":
        x = Fraction(x)
        if x == 0:
            return PadicBall.zero(p)
        num, den = x.numerator, x.denominator
        vn = int_valuation(num, p)
        vd = int_valuation(den, p)
        num //= p**vn
        den //= p**vd
        mod = p**ndigits
        u = num * pow(den, -1, mod) % mod
        return PadicBall(p, vn - vd, u, ndigits)

    @staticmethod
    def coerce(x, p: int, ndigits: int) -> "PadicBall":
        if isinstance(x, PadicBall):
            if x.p != p:
                raise ValueError("mixed primes")
            return x
        return PadicBall.from_rational(x, p, ndigits)

    # -- queries ----------------------------------------------------------
    def known_unit(self) -> bool:
        return self.exact_zero or self.unit != 0

    def valuation(self) -> int:
        if self.exact_zero:
            raise ValueError("valuation of exact 0 is +infinity")
        if self.unit == 0:
            raise PrecisionExhausted(
                f"{self.p}-adic valuation undetermined (>= {self.val})"
            )
        return self.val

    def abs_value(self) -> Fraction:
        """|x|_p as an exact rational (0 for the exact zero)."""
        if self.exact_zero:
            return Fraction(0)
        v = self.valuation()
        return Fraction(1, self.p**v) if v >= 0 else Fraction(self.p ** (-v))

    def is_possibly_zero(self) -> bool:
        return self.exact_zero or self.unit == 0

    def __repr__(self):
        if self.exact_zero:
            return f"PadicBall({self.p}-adic 0)"
        if self.unit == 0:
            return f"PadicBall(O({self.p}^{self.val}))"
        return f"PadicBall({self.p}^{self.val}*({self.unit} + O({self.p}^{self.ndigits})))"

    # -- arithmetic ---------------------------------------------------------
    def __neg__(self):
        if self.exact_zero or self.unit == 0:
            return self
        return PadicBall(self.p, self.val, (-self.unit) % self.p**self.ndigits, self.ndigits)

    def __add__(self, other):
        a, b = self, other
        if not isinstance(b, PadicBall):
            nd = a.ndigits if a.ndigits else 32
            b = PadicBall.coerce(b, a.p, max(nd, 32))
        if a.p != b.p:
            raise ValueError("mixed primes")
        p = a.p
        if a.exact_zero:
            return b
        if b.exact_zero:
            return a
        v = min(a.val, b.val)
        # digits of value/p^v known modulo p^m_i
        ma = (a.val - v) + (a.ndigits if a.unit else 0)
        mb = (b.val - v) + (b.ndigits if b.unit else 0)
        m = min(ma, mb)
        if m <= 0:
            return PadicBall(p, v, 0, 0)
        mod = p**m
        s = (a.unit * p ** (a.val - v) + b.unit * p ** (b.val - v)) % mod
        if s == 0:
            return PadicBall(p, v + m, 0, 0)
        k = int_valuation(s, p)
        return PadicBall(p, v + k, (s // p**k) % p ** (m - k), m - k)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, PadicBall):
            return self + (-other)
        return self + (-Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self, other
        if not isinstance(b, PadicBall):
            nd = a.ndigits if a.ndigits else 32
            b = PadicBall.coerce(b, a.p, max(nd, 32))
        if a.p != b.p:
            raise ValueError("mixed primes")
        p = a.p
        if a.exact_zero or b.exact_zero:
            return PadicBall.zero(p)
        if a.unit == 0 or b.unit == 0:
            return PadicBall(p, a.val + b.val, 0, 0)
        nd = min(a.ndigits, b.ndigits)
        mod = p**nd
        return PadicBall(p, a.val + b.val, (a.unit * b.unit) % mod, nd)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = other if isinstance(other, PadicBall) else PadicBall.coerce(
            other, self.p, max(self.ndigits, 32)
        )
        if b.is_possibly_zero():
            raise ZeroDivisionError("division by (possibly) zero p-adic ball")
        nd = min(self.ndigits, b.ndigits) if self.unit else b.ndigits
        if self.exact_zero:
            return PadicBall.zero(self.p)
        if self.unit == 0:
            return PadicBall(self.p, self.val - b.val, 0, 0)
        mod = self.p**nd
        u = self.unit * pow(b.unit, -1, mod) % mod
        return PadicBall(self.p, self.val - b.val, u, nd)


# ---------------------------------------------------------------------------
# mod-p polynomial helpers (dense coefficient lists, low degree first)
# ---------------------------------------------------------------------------


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _polmod(f: list[int], p: int) -> list[int]:
    return _trim([c % p for c in f])


def _polmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def _poldivmod(f, g, p):
    f = f[:]
    q = [0] * max(0, len(f) - len(g) + 1)
    inv = pow(g[-1], -1, p)
    while len(f) >= len(g) and f:
        c = f[-1] * inv % p
        d = len(f) - len(g)
        q[d] = c
        for i, b in enumerate(g):
            f[d + i] = (f[d + i] - c * b) % p
        _trim(f)
    return _trim(q), f


def _polgcd(f, g, p):
    f, g = _polmod(f, p), _polmod(g, p)
    while g:
        f, g = g, _poldivmod(f, g, p)[1]
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def _polpow_mod(base, e, modpol, p):
    result = [1]
    base = _poldivmod(base, modpol, p)[1]
    while e:
        if e & 1:
            result = _poldivmod(_polmul(result, base, p), modpol, p)[1]
        base = _poldivmod(_polmul(base, base, p), modpol, p)[1]
        e >>= 1
    return result


def is_squarefree_mod(f: list[int], p: int) -> bool:
    fm = _polmod(f, p)
    if len(fm) <= 1:
        return False
    df = _polmod([i * c for i, c in enumerate(f)][1:], p)
    return len(_polgcd(fm, df, p)) == 1


def roots_mod_p(f: list[int], p: int, rng: random.Random | None = None) -> list[int]:
    """Roots of f in F_p (f squarefree mod p assumed for completeness)."""
    fm = _polmod(f, p)
    if not fm:
        raise ValueError("zero polynomial")
    if p < 4096:
        return [a for a in range(p) if _poleval_mod(fm, a, p) == 0]
    rng = rng or random.Random(p)
    xp = _polpow_mod([0, 1], p, fm, p)
    lin = _polgcd([(a - b) % p for a, b in _zip_pad(xp, [0, 1])], fm, p)
    return sorted(_split_linear(lin, p, rng))


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return zip(a, b)


def _poleval_mod(f, a, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * a + c) % p
    return acc


def _split_linear(g, p, rng):
    # g = product of distinct monic linear factors
    if len(g) <= 1:
        return []
    if len(g) == 2:
        return [(-g[0]) * pow(g[1], -1, p) % p]
    while True:
        a = rng.randrange(p)
        h = _polpow_mod([a, 1], (p - 1) // 2, g, p)
        h = [(c - d) % p for c, d in _zip_pad(h, [1])]
        d = _polgcd(h, g, p)
        if 0 < len(d) - 1 < len(g) - 1:
            rest = _poldivmod(g, d, p)[0]
            return _split_linear(d, p, rng) + _split_linear(rest, p, rng)


def residue_degree_structure(f: list[int], p: int) -> list[tuple[int, int]]:
    """Distinct-degree structure of f mod p: list of (degree, #factors)."""
    fm = _polmod(f, p)
    out = []
    h = [0, 1]
    d = 0
    work = fm[:]
    while len(work) > 1:
        d += 1
        h = _polpow_mod(h, p, fm, p)
        g = _polgcd([(a - b) % p for a, b in _zip_pad(h, [0, 1])], work, p)
        if len(g) > 1:
            out.append((d, (len(g) - 1) // d))
            work = _poldivmod(work, g, p)[0]
        if d > len(fm):
            break
    return out


def hensel_lift_root(f: list[int], p: int, root: int, ndigits: int) -> int:
    """Lift a simple root of f mod p to a root mod p^ndigits (Newton)."""
    df = [i * c for i, c in enumerate(f)][1:]
    if _poleval_mod(df, root, p) == 0:
        raise ValueError("root is not simple mod p")
    r = root % p
    k = 1
    while k < ndigits:
        k = min(2 * k, ndigits)
        mod = p**k
        fr = _poleval_int(f, r) % mod
        dfr = _poleval_int(df, r) % mod
        r = (r - fr * pow(dfr, -1, mod)) % mod
    return r


def _poleval_int(f, a):
    acc = 0
    for c in reversed(f):
        acc = acc * a + c
    return acc
