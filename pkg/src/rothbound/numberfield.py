"""Number fields K' = Q[x]/(f), exact field-element arithmetic, and
embeddings into C (certified root balls) and into Q_p (Hensel lifts).

Base field is always Q.  Archimedean root certification is independent of
the numeric root finder: for each approximation z0 (an exact dyadic complex
number) the disk |z - z0| <= deg(f) * |f(z0)/f'(z0)| provably contains a
root, and pairwise-disjoint disks for all deg(f) approximations pin exactly
one root per disk.  Both |f(z0)| and |f'(z0)| are evaluated in exact
rational arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import sympy

from .ball import ComplexBall, RealBall
from .errors import DomainError, PrecisionExhausted, RamifiedUnsupported
from .padic import (
    PadicBall,
    hensel_lift_root,
    is_squarefree_mod,
    residue_degree_structure,
    roots_mod_p,
)
from .places import Place
from .primes import is_prime

_F = Fraction


@dataclass(frozen=True)
class NumberField:
    """Q[theta] for theta a root of a monic irreducible integer polynomial.

    ``minimal_polynomial`` is the coefficient tuple, low degree first,
    trailing coefficient 1.
    """

    minimal_polynomial: tuple[int, ...]

    def __post_init__(self):
        f = self.minimal_polynomial
        if len(f) < 3:
            raise DomainError("degree >= 2 required")
        if f[-1] != 1:
            raise DomainError("monic polynomial required")
        if self.degree > 8:
            raise DomainError("degrees above 8 are not supported")
        poly = sympy.Poly(list(reversed(f)), sympy.Symbol("x"))
        if not poly.is_irreducible:
            raise DomainError("polynomial is reducible over Q")

    @property
    def degree(self) -> int:
        return len(self.minimal_polynomial) - 1

    def gen(self) -> "FieldElem":
        coords = [_F(0)] * self.degree
        coords[1] = _F(1)
        return FieldElem(self, tuple(coords))

    def element(self, coords) -> "FieldElem":
        coords = tuple(_F(c) for c in coords)
        if len(coords) != self.degree:
            raise DomainError("coordinate vector length must equal the degree")
        return FieldElem(self, coords)

    def from_rational(self, x) -> "FieldElem":
        coords = [_F(x)] + [_F(0)] * (self.degree - 1)
        return FieldElem(self, tuple(coords))

    @property
    def _theta_power_table(self):
        # theta^k for k = degree .. 2*degree-2, reduced to the power basis
        q = self.degree
        f = self.minimal_polynomial
        tbl = []
        cur = [-_F(c) for c in f[:-1]]  # theta^q
        tbl.append(tuple(cur))
        for _ in range(q - 2):
            nxt = [_F(0)] + cur[:-1]
            lead = nxt.pop() if len(nxt) > q else _F(0)
            if len(nxt) < q:
                nxt += [_F(0)] * (q - len(nxt))
            if lead:
                nxt = [a + lead * b for a, b in zip(nxt, tbl[0])]
            cur = nxt
            tbl.append(tuple(cur))
        return tbl

    def __repr__(self):
        return f"NumberField({list(self.minimal_polynomial)})"


@dataclass(frozen=True)
class FieldElem:
    field: NumberField
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != self.field.degree:
            raise DomainError("coordinate vector length must equal the degree")

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise DomainError("element is not rational")
        return self.coords[0]

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise DomainError("mixed number fields")
            return other
        return self.field.from_rational(other)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElem(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElem(self.field, tuple(a * other for a in self.coords))
        o = self._coerce(other)
        q = self.field.degree
        prod = [_F(0)] * (2 * q - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    if b:
                        prod[i + j] += a * b
        out = list(prod[:q])
        tbl = self.field._theta_power_table
        for k in range(q, 2 * q - 1):
            c = prod[k]
            if c:
                red = tbl[k - q]
                out = [a + c * b for a, b in zip(out, red)]
        return FieldElem(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        # extended Euclid in Q[x] against the minimal polynomial
        f = [_F(c) for c in self.field.minimal_polynomial]
        g = list(self.coords)
        s0, s1 = [_F(0)], [_F(1)]
        r0, r1 = f, g

        def trim(p):
            while p and p[-1] == 0:
                p.pop()
            return p

        r0, r1 = trim(r0[:]), trim(r1[:])
        while len(r1) > 1 or (len(r1) == 1 and False):
            qpoly, rem = _polydiv(r0, r1)
            r0, r1 = r1, trim(rem)
            s0, s1 = s1, trim(_polysub(s0, _polymul(qpoly, s1)))
            if len(r1) <= 1:
                break
        if not r1:
            raise ZeroDivisionError("element shares a factor with the modulus")
        c = r1[0]
        inv = [x / c for x in s1]
        inv += [_F(0)] * (self.field.degree - len(inv))
        return FieldElem(self.field, tuple(inv[: self.field.degree]))

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.field == other.field and self.coords == other.coords

    def __hash__(self):
        return hash((self.field.minimal_polynomial, self.coords))

    def minimal_polynomial(self) -> tuple[Fraction, ...]:
        """Monic minimal polynomial of this element over Q (low degree first)."""
        from .linalg import rref

        q = self.field.degree
        powers = [self.field.from_rational(1)]
        for _ in range(q):
            powers.append(powers[-1] * self)
        for d in range(1, q + 1):
            # look for a dependency 1, a, ..., a^d
            rows = [list(powers[k].coords) for k in range(d)]
            red, pivots = rref(rows)
            target = list(powers[d].coords)
            # solve sum c_k a^k = a^d exactly if a^d is in the span
            sol = _solve_in_span(red, pivots, rows, target)
            if sol is not None:
                coeffs = [-c for c in sol] + [_F(1)]
                return tuple(coeffs)
        raise AssertionError("element has no minimal polynomial below field degree")

    def degree(self) -> int:
        return len(self.minimal_polynomial()) - 1

    def generates_field(self) -> bool:
        return self.degree() == self.field.degree

    def __repr__(self):
        return f"FieldElem({self.coords})"


def _polydiv(a, b):
    a = a[:]
    q = [_F(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] / b[-1]
        d = len(a) - len(b)
        q[d] = c
        for i, bc in enumerate(b):
            a[d + i] -= c * bc
        a.pop()
    return q, a


def _polymul(a, b):
    out = [_F(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _polysub(a, b):
    n = max(len(a), len(b))
    return [
        (a[i] if i < len(a) else _F(0)) - (b[i] if i < len(b) else _F(0))
        for i in range(n)
    ]


def _solve_in_span(red, pivots, original_rows, target):
    """Coefficients expressing target in the row space, or None."""
    t = list(target)
    coeffs_in_red = []
    for i, pc in enumerate(pivots):
        c = t[pc]
        coeffs_in_red.append(c)
        if c:
            t = [a - c * b for a, b in zip(t, red[i])]
    if any(t):
        return None
    # convert: red rows are combinations of original rows; re-derive by
    # solving the small system original_rows^T x = target via rref
    from .linalg import rref as _rref

    k = len(original_rows)
    aug = [[original_rows[j][c] for j in range(k)] + [target[c]] for c in range(len(target))]
    red2, piv2 = _rref(aug)
    sol = [_F(0)] * k
    for i, pc in enumerate(piv2):
        if pc == k:
            return None  # inconsistent
        sol[pc] = red2[i][k]
    return sol


# ---------------------------------------------------------------------------
# embeddings
# ---------------------------------------------------------------------------


@dataclass
class Embedding:
    """A K-linear embedding of the field into C_v, pinned by a root ball."""

    field: NumberField
    place: Place
    root: ComplexBall | PadicBall
    precision: int
    _index: int = 0

    def is_archimedean(self) -> bool:
        return self.place.is_archimedean()

    def refine(self, precision: int) -> "Embedding":
        if precision <= self.precision:
            return self
        if self.is_archimedean():
            roots = complex_embeddings(self.field, precision)
            for e in roots:
                if _balls_overlap(e.root, self.root):
                    return Embedding(self.field, self.place, e.root, precision, self._index)
            raise PrecisionExhausted("refined roots lost track of the original ball")
        return padic_embeddings(self.field, self.place, precision)[self._index]

    def __repr__(self):
        return f"Embedding({self.place}, root={self.root!r})"


def _balls_overlap(a: ComplexBall, b: ComplexBall) -> bool:
    return not (
        a.re.hi < b.re.lo
        or b.re.hi < a.re.lo
        or a.im.hi < b.im.lo
        or b.im.hi < a.im.lo
    )


def _eval_poly_complex_exact(coeffs, z_re: Fraction, z_im: Fraction):
    re, im = _F(0), _F(0)
    for c in reversed(coeffs):
        re, im = re * z_re - im * z_im + c, re * z_im + im * z_re
    return re, im


def complex_embeddings(field: NumberField, precision: int = 64) -> list[Embedding]:
    """All deg(f) complex roots as certified ComplexBall embeddings."""
    if precision < 32:
        raise DomainError("precision >= 32 required")
    f = field.minimal_polynomial
    n = field.degree
    df = [i * c for i, c in enumerate(f)][1:]
    wp = 2 * precision + 32
    for attempt in range(6):
        with mpmath.workprec(wp):
            approx = mpmath.polyroots(
                [mpmath.mpf(c) for c in reversed(f)], maxsteps=200, extraprec=wp
            )
            dyadic = [(_mpf_to_fraction(z.real), _mpf_to_fraction(z.imag)) for z in approx]
        disks = []
        ok = True
        for zre, zim in dyadic:
            fre, fim = _eval_poly_complex_exact(f, zre, zim)
            dre, dim_ = _eval_poly_complex_exact(df, zre, zim)
            fv2 = fre * fre + fim * fim
            dv2 = dre * dre + dim_ * dim_
            if dv2 == 0:
                ok = False
                break
            # radius^2 <= n^2 |f|^2/|f'|^2 ; take a rational upper bound of the sqrt
            r2 = _F(n * n) * fv2 / dv2
            rad = _frac_sqrt_upper(r2)
            disks.append((zre, zim, rad))
        if ok:
            for (a, b, r1), (c, d, r2) in itertools.combinations(disks, 2):
                if (a - c) ** 2 + (b - d) ** 2 <= (r1 + r2) ** 2:
                    ok = False
                    break
        if ok and all(r <= _F(1, 2 ** (precision + 1)) for *_z, r in disks):
            out = []
            for idx, (zre, zim, rad) in enumerate(sorted(disks)):
                ball = ComplexBall(
                    RealBall(zre - rad, zre + rad), RealBall(zim - rad, zim + rad)
                )
                out.append(Embedding(field, Place.archimedean(), ball, precision, idx))
            return out
        wp *= 2
    raise PrecisionExhausted("could not certify the complex roots")


def _mpf_to_fraction(x) -> Fraction:
    return _F(mpmath.libmp.to_rational(x._mpf_)[0], mpmath.libmp.to_rational(x._mpf_)[1])


def _frac_sqrt_upper(x: Fraction) -> Fraction:
    """A rational upper bound for sqrt(x), tight to ~1 ulp of the isqrt."""
    if x == 0:
        return _F(0)
    num, den = x.numerator, x.denominator
    # sqrt(num/den) <= isqrt(num*den + stuff)/den
    s = math.isqrt(num * den)
    if s * s < num * den:
        s += 1
    return _F(s, den)


def padic_embeddings(field: NumberField, place: Place, precision: int = 64) -> list[Embedding]:
    """Embeddings into Q_p: one per simple root of f in Z_p (Hensel lifts).

    Residual factors of degree >= 2 are unramified blocks, reported via
    ``residue_blocks``; they carry no Q_p-valued embedding here.  Raises
    RamifiedUnsupported when f mod p is not squarefree.
    """
    if place.is_archimedean():
        raise DomainError("finite place required")
    p = place.prime
    f = list(field.minimal_polynomial)
    if not is_squarefree_mod(f, p):
        raise RamifiedUnsupported(f"minimal polynomial not separable mod {p}")
    nd = max(2, math.ceil(precision / math.log2(p)) + 2)
    out = []
    for idx, r in enumerate(roots_mod_p(f, p)):
        lifted = hensel_lift_root(f, p, r, nd)
        if lifted % p == 0:
            ball = PadicBall(p, _val_int(lifted, p, nd), 0, 0) if lifted == 0 else _padic_of_int(lifted, p, nd)
        else:
            ball = PadicBall(p, 0, lifted, nd)
        out.append(Embedding(field, place, ball, precision, idx))
    return out


def _val_int(m, p, nd):
    v = 0
    while m % p == 0 and v < nd:
        m //= p
        v += 1
    return v


def _padic_of_int(m, p, nd):
    v = _val_int(m, p, nd)
    return PadicBall(p, v, (m // p**v) % p ** (nd - v), nd - v)


def residue_blocks(field: NumberField, place: Place) -> list[tuple[int, int]]:
    """Degree structure [(degree, count), ...] of f modulo the prime."""
    if place.is_archimedean():
        raise DomainError("finite place required")
    p = place.prime
    f = list(field.minimal_polynomial)
    if not is_squarefree_mod(f, p):
        raise RamifiedUnsupported(f"minimal polynomial not separable mod {p}")
    return residue_degree_structure(f, p)


def embeddings(field: NumberField, place: Place, precision: int = 64) -> list[Embedding]:
    """All supported K-linear embeddings of the field into C_v."""
    if place.is_archimedean():
        return complex_embeddings(field, precision)
    return padic_embeddings(field, place, precision)


def eval_embedded(emb: Embedding, x: FieldElem | Fraction | int, precision: int = 64):
    """sigma(x) as a ball with radius below ~2^-precision (after refinement)."""
    if isinstance(x, (int, Fraction)):
        if emb.is_archimedean():
            return ComplexBall.exact(_F(x))
        nd = max(2, math.ceil(precision / math.log2(emb.place.prime)) + 2)
        return PadicBall.from_rational(x, emb.place.prime, nd)
    if x.field != emb.field:
        raise DomainError("element belongs to a different field")
    if x.is_rational():
        return eval_embedded(emb, x.coords[0], precision)
    e = emb
    for _ in range(8):
        acc = None
        if e.is_archimedean():
            acc = ComplexBall.exact(0)
            for c in reversed(x.coords):
                acc = acc * e.root + ComplexBall.exact(c)
            width = max(acc.re.rad, acc.im.rad)
            if width <= _F(1, 2 ** max(4, precision - 8)):
                return acc
        else:
            p = e.place.prime
            nd = max(2, math.ceil(precision / math.log2(p)) + 2)
            acc = PadicBall.zero(p)
            for c in reversed(x.coords):
                acc = acc * e.root + PadicBall.from_rational(c, p, nd)
            return acc
        e = e.refine(2 * e.precision)
    raise PrecisionExhausted("embedding refinement budget exceeded")
