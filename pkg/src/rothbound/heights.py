"""Heights, v-adic spherical distances, and proximity sums on the
projective line over Q and over a number field.

The height uses the l2 norm at archimedean places and the max norm at
finite places; distances are the normalized cross terms
|x0 y1 - x1 y0|_v / (||x||_v ||y||_v), always in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .ball import ComplexBall, RealBall, ball_sum, log_ball, sqrt_ball
from .errors import DistanceZero, DomainError, EqualPoints
from .numberfield import Embedding, FieldElem, NumberField, complex_embeddings, eval_embedded
from .padic import PadicBall
from .places import Place, abs_value
from .primes import factorize, valuation

_F = Fraction


@dataclass(frozen=True)
class ProjPoint:
    """A point (x0 : x1) of P^1 over Q or over a number field.

    Q-points are canonicalized eagerly to the primitive integer
    representative with gcd 1 and x0 >= 0 (x1 > 0 when x0 = 0).
    """

    x0: Fraction | FieldElem
    x1: Fraction | FieldElem

    def __post_init__(self):
        if self.is_zero_pair():
            raise DomainError("(0, 0) does not define a projective point")

    def is_zero_pair(self):
        z0 = self.x0 == 0 if not isinstance(self.x0, FieldElem) else self.x0.is_zero()
        z1 = self.x1 == 0 if not isinstance(self.x1, FieldElem) else self.x1.is_zero()
        return z0 and z1

    # -- constructors ---------------------------------------------------
    @staticmethod
    def rational(x0, x1) -> "ProjPoint":
        x0, x1 = _F(x0), _F(x1)
        if x0 == x1 == 0:
            raise DomainError("(0, 0) does not define a projective point")
        den = math.lcm(x0.denominator, x1.denominator)
        a, b = int(x0 * den), int(x1 * den)
        g = math.gcd(a, b)
        a, b = a // g, b // g
        if a < 0 or (a == 0 and b < 0):
            a, b = -a, -b
        return ProjPoint(_F(a), _F(b))

    @staticmethod
    def over_field(field: NumberField, c0, c1) -> "ProjPoint":
        def lift(c):
            if isinstance(c, FieldElem):
                return c
            return field.from_rational(c)

        a, b = lift(c0), lift(c1)
        if a.is_zero() and b.is_zero():
            raise DomainError("(0, 0) does not define a projective point")
        if a.is_rational() and b.is_rational():
            return ProjPoint.rational(a.as_rational(), b.as_rational())
        return ProjPoint(a, b)

    # -- queries -----------------------------------------------------------
    def is_rational_point(self) -> bool:
        return not isinstance(self.x0, FieldElem)

    @property
    def field(self) -> NumberField | None:
        if isinstance(self.x0, FieldElem):
            return self.x0.field
        return None

    def ints(self) -> tuple[int, int]:
        if not self.is_rational_point():
            raise DomainError("not a Q-point")
        return int(self.x0), int(self.x1)

    def affine(self):
        """x1/x0; requires x0 != 0."""
        if self.is_rational_point():
            if self.x0 == 0:
                raise DomainError("point at infinity")
            return self.x1 / self.x0
        if self.x0.is_zero():
            raise DomainError("point at infinity")
        return self.x1 / self.x0

    def same_as(self, other: "ProjPoint") -> bool:
        cross = _cross(self, other)
        if isinstance(cross, FieldElem):
            return cross.is_zero()
        return cross == 0

    def embed(self, emb: Embedding, precision: int = 64) -> "EmbeddedPoint":
        c0 = eval_embedded(emb, self.x0, precision)
        c1 = eval_embedded(emb, self.x1, precision)
        return EmbeddedPoint(emb.place, c0, c1)

    def __repr__(self):
        return f"ProjPoint({self.x0} : {self.x1})"


@dataclass(frozen=True)
class EmbeddedPoint:
    """A C_v-point of P^1: coordinate balls tagged with their place."""

    place: Place
    c0: ComplexBall | PadicBall
    c1: ComplexBall | PadicBall


def _cross(x: ProjPoint, y: ProjPoint):
    return x.x0 * y.x1 - x.x1 * y.x0


def norm_v_rational(v: Place, a: Fraction, b: Fraction):
    """||(a, b)||_v: exact max at finite places, l2 ball at the archimedean."""
    if v.is_archimedean():
        return sqrt_ball(_F(a) ** 2 + _F(b) ** 2)
    return max(abs_value(v, a), abs_value(v, b))


def height(x: ProjPoint, precision: int = 64) -> RealBall:
    """Absolute logarithmic height with the l2 archimedean norm."""
    if x.is_rational_point():
        a, b = x.ints()
        return log_ball(_F(a * a + b * b), precision) * _F(1, 2)
    # (a0 : a1) over K'.  If a0 = 0 the point is (0 : 1) with height 0.
    if x.x0.is_zero() or x.x1.is_zero():
        return RealBall.exact(0)
    alpha = x.affine()
    if alpha.is_rational():
        return height(ProjPoint.rational(1, alpha.as_rational()), precision)
    # q h = log(c) + sum_j log sqrt(1 + |alpha_j|^2) over the complex roots
    # of the primitive integer minimal polynomial c x^d + ...
    minpoly = alpha.minimal_polynomial()
    den = math.lcm(*(c.denominator for c in minpoly))
    ints = [int(c * den) for c in minpoly]
    g = math.gcd(*ints)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    d = len(ints) - 1
    lead = ints[-1]
    roots = _roots_of_int_poly(ints, precision)
    total = log_ball(_F(lead), precision) if lead > 1 else RealBall.exact(0)
    for rb in roots:
        total = total + (RealBall.exact(1) + rb.abs2()).log(precision + 16) * _F(1, 2)
    return total * _F(1, d)


def _roots_of_int_poly(ints: Sequence[int], precision: int) -> list[ComplexBall]:
    # reuse the certified machinery on the monic rational version
    from .numberfield import _eval_poly_complex_exact, _frac_sqrt_upper  # noqa: F401
    import mpmath
    import itertools as _it

    n = len(ints) - 1
    f = [_F(c) for c in ints]
    df = [i * c for i, c in enumerate(f)][1:]
    wp = 2 * precision + 32
    for _ in range(6):
        with mpmath.workprec(wp):
            approx = mpmath.polyroots([mpmath.mpf(c) for c in reversed(ints)], maxsteps=200, extraprec=wp)
            from .numberfield import _mpf_to_fraction

            dyadic = [(_mpf_to_fraction(z.real), _mpf_to_fraction(z.imag)) for z in approx]
        disks = []
        ok = True
        for zre, zim in dyadic:
            fre, fim = _eval_poly_complex_frac(f, zre, zim)
            dre, dim_ = _eval_poly_complex_frac(df, zre, zim)
            dv2 = dre * dre + dim_ * dim_
            if dv2 == 0:
                ok = False
                break
            r2 = _F(n * n) * (fre * fre + fim * fim) / dv2
            disks.append((zre, zim, _frac_sqrt_upper(r2)))
        if ok:
            for (a, b, r1), (c, d, r2) in _it.combinations(disks, 2):
                if (a - c) ** 2 + (b - d) ** 2 <= (r1 + r2) ** 2:
                    ok = False
                    break
        if ok and all(r <= _F(1, 2 ** (precision // 2)) for *_z, r in disks):
            return [
                ComplexBall(RealBall(a - r, a + r), RealBall(b - r, b + r))
                for a, b, r in disks
            ]
        wp *= 2
    raise DomainError("could not certify the roots of the minimal polynomial")


def _eval_poly_complex_frac(coeffs, z_re, z_im):
    re, im = _F(0), _F(0)
    for c in reversed(coeffs):
        re, im = re * z_re - im * z_im + c, re * z_im + im * z_re
    return re, im


def distance_v(x, y, v: Place, precision: int = 64):
    """v-adic spherical distance; exact Fraction for rational inputs at a
    finite place, a rigorous RealBall otherwise."""
    xe = _as_evaluable(x, v)
    ye = _as_evaluable(y, v)
    if isinstance(xe, ProjPoint) and isinstance(ye, ProjPoint):
        return _distance_rational(xe, ye, v, precision)
    return _distance_embedded(xe, ye, v, precision)


def _as_evaluable(pt, v: Place):
    if isinstance(pt, EmbeddedPoint):
        if pt.place != v:
            raise DomainError("embedded point lives at a different place")
        return pt
    if isinstance(pt, ProjPoint):
        if not pt.is_rational_point():
            raise DomainError(
                "number-field points need an explicit embedding at this place"
            )
        return pt
    raise TypeError("expected ProjPoint or EmbeddedPoint")


def _distance_rational(x: ProjPoint, y: ProjPoint, v: Place, precision: int):
    a, b = x.ints()
    c, d = y.ints()
    cross = a * d - b * c
    if v.is_archimedean():
        if cross == 0:
            return RealBall.exact(0)
        n2 = _F(cross * cross, (a * a + b * b) * (c * c + d * d))
        return sqrt_ball(n2, precision)
    # primitive integer representatives have unit max-norm at every prime
    if cross == 0:
        return _F(0)
    return abs_value(v, _F(cross))


def _coerce_local(val, v: Place, precision: int):
    if v.is_archimedean():
        if isinstance(val, ComplexBall):
            return val
        if isinstance(val, RealBall):
            return ComplexBall(val, RealBall.exact(0))
        return ComplexBall.exact(_F(val))
    if isinstance(val, PadicBall):
        return val
    nd = max(2, math.ceil(precision / math.log2(v.prime)) + 2)
    return PadicBall.from_rational(_F(val), v.prime, nd)


def _distance_embedded(x, y, v: Place, precision: int):
    def coords(pt):
        if isinstance(pt, ProjPoint):
            a, b = pt.ints()
            return _coerce_local(_F(a), v, precision), _coerce_local(_F(b), v, precision)
        return _coerce_local(pt.c0, v, precision), _coerce_local(pt.c1, v, precision)

    a0, a1 = coords(x)
    b0, b1 = coords(y)
    cross = a0 * b1 - a1 * b0
    if v.is_archimedean():
        num = abs(cross)
        den = (a0.abs2() + a1.abs2()).sqrt(precision) * (b0.abs2() + b1.abs2()).sqrt(precision)
        return num / den
    cv = cross.abs_value() if not cross.is_possibly_zero() else None
    if cross.exact_zero:
        return _F(0)
    if cv is None:
        cross.valuation()  # raises PrecisionExhausted with context
    nx = max(a0.abs_value(), a1.abs_value())
    ny = max(b0.abs_value(), b1.abs_value())
    return cv / (nx * ny)


def proximity(x, targets, precision: int = 64) -> RealBall:
    """sum of -log d_v(target, x) over (embedded target, place) pairs."""
    total = RealBall.exact(0)
    for target, v in targets:
        d = distance_v(x, target, v, precision)
        if isinstance(d, Fraction):
            if d == 0:
                raise DistanceZero("proximity infinite: points coincide in C_v")
            total = total - log_ball(d, precision)
        else:
            if d.sign() == 0 or d.hi == 0:
                raise DistanceZero("proximity infinite: points coincide in C_v")
            if d.lo <= 0:
                raise DomainError("distance ball touches 0; raise the precision")
            total = total - d.log(precision)
    return total


def liouville_check(x: ProjPoint, y: ProjPoint) -> dict:
    """Exact verification of m_{V_K}(x, y) = h(x) + h(y) over Q.

    With primitive representatives the identity reduces to the product
    formula on the cross term: the finite-place proximities contribute
    log |cross| in total, which must cancel the archimedean excess exactly.
    Returns a report with exact witnesses; ``ok`` is exact True/False.
    """
    if not (x.is_rational_point() and y.is_rational_point()):
        raise DomainError("both points must be Q-points")
    a, b = x.ints()
    c, d = y.ints()
    cross = a * d - b * c
    if cross == 0:
        raise EqualPoints("the points coincide")
    fac = factorize(cross)
    finite_product = math.prod(p**e for p, e in fac.items())
    distances_ok = all(
        abs_value(Place.finite(p), _F(cross)) == _F(1, p**e) for p, e in fac.items()
    )
    # m_V = sum_p e_p log p + log(||x|| ||y|| / |cross|); h + h = log(||x|| ||y||)
    ok = finite_product == abs(cross) and distances_ok
    return {
        "ok": ok,
        "cross": cross,
        "factorization": fac,
        "norm_x_sq": a * a + b * b,
        "norm_y_sq": c * c + d * d,
        "inequality": "liouville-identity",
    }
