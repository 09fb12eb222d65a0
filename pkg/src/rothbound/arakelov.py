"""Hermitian norms on section spaces, exact Plücker heights of kernels,
the height upper bounds, instability measures at the explicit
distance-measuring group elements, the quotient lower-bound evaluator,
and the toy-scale permutation-operator norm check.

Archimedean norms make the monomial basis orthogonal with
||T(l)||^2 = prod binom(r_i, l_i)^{-1}; finite places use the integral
lattice max norm.  The wedge norm of a subspace basis is computed from the
exact Gram determinant (archimedean) and the determinantal content of an
integer basis matrix (finite places).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import combinatorics as comb
from .ball import ComplexBall, RealBall, ball_sum, log_ball, sqrt_ball
from .errors import (
    CoincidentPoints,
    DomainError,
    PrecisionExhausted,
    SizeLimit,
    ZeroSubspace,
)
from .heights import EmbeddedPoint, ProjPoint, distance_v, height
from .linalg import determinantal_divisor, gram_det, scale_rows_to_int
from .padic import PadicBall
from .places import Place
from .primes import valuation as int_valuation
from .sections import MultiHomogPoly, SectionSubspace, box_monomials, substitute

_F = Fraction

PLUCKER_SIZE_LIMIT = 10**6


@dataclass(frozen=True)
class HermitianStructure:
    """The tensor-operation norms on the degree-r section space."""

    r: tuple[int, ...]

    @staticmethod
    def for_degree(r: Sequence[int]) -> "HermitianStructure":
        return HermitianStructure(tuple(r))

    def monomial_norm2(self, l: Sequence[int]) -> Fraction:
        num, den = 1, 1
        for ri, li in zip(self.r, l):
            den *= math.comb(ri, li)
        return _F(num, den)

    def gram_diagonal(self) -> tuple[Fraction, ...]:
        return tuple(self.monomial_norm2(l) for l in box_monomials(self.r))


# ---------------------------------------------------------------------------
# Plücker heights and the two upper bounds
# ---------------------------------------------------------------------------


def plucker_height_exact(W: SectionSubspace, H: HermitianStructure | None = None):
    """(gram determinant, finite content) for one integral basis of W.

    The height is  (1/2) log(gram) - log(content); both witnesses are exact.
    """
    if W.dim == 0:
        raise ZeroSubspace("the zero subspace has no Plücker point")
    if H is None:
        H = HermitianStructure.for_degree(W.r)
    if math.comb(W.ambient_dim, W.dim) > PLUCKER_SIZE_LIMIT:
        raise SizeLimit("Plücker coordinate count exceeds the configured bound")
    rows = scale_rows_to_int(W.basis)
    diag = H.gram_diagonal()
    g = gram_det([[_F(x) for x in row] for row in rows], diag)
    content = determinantal_divisor(rows)
    return g, content


def plucker_height(
    W: SectionSubspace, H: HermitianStructure | None = None, precision: int = 128
) -> RealBall:
    g, content = plucker_height_exact(W, H)
    out = log_ball(g, precision) * _F(1, 2)
    if content != 1:
        out = out - log_ball(_F(content), precision)
    return out


def ub_height_rational(x, r: Sequence[int], t_x, precision: int = 128) -> RealBall:
    """sum_i (sum over the upper lattice set of l_i) h(x_i)."""
    total = RealBall.exact(0)
    for i in range(len(r)):
        s = comb.upper_coordinate_sum(r, t_x, i + 1)
        if s:
            total = total + height(x[i], precision) * _F(s)
    return total


def ub_height_algebraic(
    a, r: Sequence[int], t_a, k: int, precision: int = 128
) -> RealBall:
    """(prod(r_i + 1) - k) (q sum r_i h(a_i) + |r| log sqrt(2q))."""
    fields = {ai.field for ai in a if ai.field is not None}
    if len(fields) != 1:
        raise DomainError("target points must share one number field")
    q = next(iter(fields)).degree
    n_amb = math.prod(ri + 1 for ri in r)
    hsum = RealBall.exact(0)
    for ri, ai in zip(r, a):
        hsum = hsum + height(ai, precision) * _F(ri)
    size = sum(r)
    bracket = hsum * _F(q) + log_ball(_F(2 * q), precision) * _F(size, 2)
    return bracket * _F(n_amb - k)


# ---------------------------------------------------------------------------
# the distance-measuring group elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupFactor:
    """One SL2-factor: the dual-action matrix [[a0, a1], [x0, x1]] built
    from norm-1 representatives, plus the cross term a0 x1 - a1 x0."""

    place: Place
    dual: tuple  # ((a0, a1), (x0, x1)) ball entries
    cross: object  # ball: det of the dual matrix = 1/det(g)

    def substitution(self) -> tuple:
        # coefficient vectors map by columns: T0 -> a0 T0 + x0 T1, etc.
        (a0, a1), (x0, x1) = self.dual
        return (a0, x0, a1, x1)

    def abs_det_g(self):
        """|det g|_v = |cross|_v^{-1} (a RealBall, or exact at finite v)."""
        if self.place.is_archimedean():
            return RealBall.exact(1) / abs(self.cross)
        return 1 / self.cross.abs_value()


@dataclass(frozen=True)
class GroupElement:
    factors: tuple[GroupFactor, ...]

    @property
    def place(self) -> Place:
        return self.factors[0].place

    def substitutions(self):
        return [f.substitution() for f in self.factors]


def _normalize_arch(c0, c1, precision):
    z0 = ComplexBall.coerce(c0)
    z1 = ComplexBall.coerce(c1)
    n = (z0.abs2() + z1.abs2()).sqrt(precision)
    inv = RealBall.exact(1) / n
    return z0 * inv, z1 * inv


def _normalize_padic(c0, c1, p, precision):
    nd = max(2, math.ceil(precision / math.log2(p)) + 2)
    b0 = c0 if isinstance(c0, PadicBall) else PadicBall.from_rational(_F(c0), p, nd)
    b1 = c1 if isinstance(c1, PadicBall) else PadicBall.from_rational(_F(c1), p, nd)
    vals = []
    for b in (b0, b1):
        if not b.exact_zero:
            vals.append(b.valuation())
    m = min(vals)
    scale = PadicBall.from_rational(_F(1, p**m) if m >= 0 else _F(p**-m), p, nd)
    return b0 * scale, b1 * scale


def g_element(x: ProjPoint, a: EmbeddedPoint, v: Place, precision: int = 128) -> GroupFactor:
    """The group factor measuring d_v(a, x); representatives are normalized
    to unit v-norm internally, and |det g| d_v = 1 is checked."""
    if a.place != v:
        raise DomainError("embedded point lives at a different place")
    if not x.is_rational_point():
        raise DomainError("x must be a Q-point")
    xi0, xi1 = x.ints()
    if v.is_archimedean():
        a0, a1 = _normalize_arch(a.c0, a.c1, precision)
        x0, x1 = _normalize_arch(_F(xi0), _F(xi1), precision)
        cross = a0 * x1 - a1 * x0
        if cross.abs2().sign() == 0:
            raise CoincidentPoints("the two points coincide in C_v")
    else:
        p = v.prime
        a0, a1 = _normalize_padic(a.c0, a.c1, p, precision)
        x0, x1 = _normalize_padic(_F(xi0), _F(xi1), p, precision)
        cross = a0 * x1 - a1 * x0
        if cross.exact_zero:
            raise CoincidentPoints("the two points coincide in C_v")
        if cross.is_possibly_zero():
            raise PrecisionExhausted("cross term valuation undetermined")
    return GroupFactor(v, ((a0, a1), (x0, x1)), cross)


def group_element(xs, embedded, v: Place, precision: int = 128) -> GroupElement:
    return GroupElement(
        tuple(g_element(x, a, v, precision) for x, a in zip(xs, embedded))
    )


def det_distance_identity(
    factor: GroupFactor, x: ProjPoint, a: EmbeddedPoint, v: Place, precision: int = 128
):
    """|det g|_v * d_v(a, x) as a ball (must contain 1; width ~2^-precision)."""
    d = distance_v(x, a, v, precision)
    det = factor.abs_det_g()
    if isinstance(d, Fraction):
        d = RealBall.exact(d)
    if isinstance(det, Fraction):
        det = RealBall.exact(det)
    return det * d


# ---------------------------------------------------------------------------
# wedge norms and instability measures at a group element
# ---------------------------------------------------------------------------


def _ball_det(matrix, precision: int) -> ComplexBall:
    """Determinant of a square ComplexBall matrix by Gaussian elimination."""
    n = len(matrix)
    m = [row[:] for row in matrix]
    det = ComplexBall.exact(1)
    for k in range(n):
        piv = None
        best = -1.0
        for i in range(k, n):
            mag = float(m[i][k].abs2().mid)
            if m[i][k].abs2().sign() == 1 and mag > best:
                best = mag
                piv = i
        if piv is None:
            raise PrecisionExhausted("pivot ball straddles zero in determinant")
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det = det * m[k][k]
        inv = ComplexBall.exact(1) / m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] * inv
            m[i] = [
                (m[i][j] - f * m[k][j]).round(2 * precision + 64)
                for j in range(n)
            ]
    return det


def _transformed_rows(W: SectionSubspace, g: GroupElement):
    mons = box_monomials(W.r)
    rows = []
    subs = g.substitutions()
    for p in W.polys():
        q = substitute(p, subs)
        rows.append([q.coeffs.get(l, 0) for l in mons])
    return rows


def _arch_wedge_log_norm2(rows, diag, precision: int) -> RealBall:
    """log of det(B diag B^H) for ComplexBall rows."""
    k = len(rows)
    gram = []
    for i in range(k):
        line = []
        for j in range(k):
            acc = ComplexBall.exact(0)
            for c, d in enumerate(diag):
                bi = ComplexBall.coerce(rows[i][c]) if not isinstance(rows[i][c], ComplexBall) else rows[i][c]
                bj = ComplexBall.coerce(rows[j][c]) if not isinstance(rows[j][c], ComplexBall) else rows[j][c]
                acc = acc + bi * bj.conj() * RealBall.exact(d)
            line.append(acc.round(2 * precision + 64))
        gram.append(line)
    det = _ball_det(gram, precision)
    if not det.im.contains(0):
        raise PrecisionExhausted("hermitian determinant has nonreal enclosure")
    if det.re.sign() != 1:
        raise PrecisionExhausted("gram determinant ball touches zero")
    return det.re.log(precision)


def _padic_wedge_valuation(rows, p: int) -> int:
    """Valuation of the wedge of PadicBall rows: sum of minimal-valuation
    pivots in an ultrametric elimination (Smith form over Z_p)."""
    m = [row[:] for row in rows]
    k = len(m)
    ncols = len(m[0])
    used_cols: set[int] = set()
    total = 0
    for step in range(k):
        best = None
        for i in range(step, k):
            for j in range(ncols):
                if j in used_cols:
                    continue
                e = m[i][j]
                if isinstance(e, PadicBall):
                    if e.exact_zero:
                        continue
                    if e.unit == 0:
                        continue
                    v = e.val
                else:
                    if e == 0:
                        continue
                    v = int_valuation(_F(e).numerator, p) - int_valuation(_F(e).denominator, p)
                if best is None or v < best[0]:
                    best = (v, i, j)
        if best is None:
            raise PrecisionExhausted("p-adic elimination ran out of certain pivots")
        v, bi, bj = best
        m[step], m[bi] = m[bi], m[step]
        total += v
        used_cols.add(bj)
        piv = _as_padic(m[step][bj], p)
        for i in range(step + 1, k):
            e = _as_padic(m[i][bj], p)
            if e.exact_zero or (e.unit == 0 and e.val >= piv.val + piv.ndigits):
                continue
            f = e / piv
            m[i] = [
                _as_padic(m[i][j], p) - f * _as_padic(m[step][j], p)
                for j in range(ncols)
            ]
    return total


def _as_padic(e, p, nd: int = 64):
    if isinstance(e, PadicBall):
        return e
    return PadicBall.from_rational(_F(e), p, nd)


def iota_at(
    g: GroupElement, W: SectionSubspace, v: Place, precision: int = 128
) -> RealBall:
    """log( ||g * w||_v / ||w||_v ) for w the wedge of a basis of W."""
    if v.is_archimedean():
        if W.dim == 0:
            raise ZeroSubspace("zero subspace")
        int_rows = scale_rows_to_int(W.basis)
        Wint = SectionSubspace(W.r, tuple(tuple(map(_F, r)) for r in int_rows))
        new_rows = _transformed_rows(Wint, g)
        diag = HermitianStructure.for_degree(W.r).gram_diagonal()
        new_log = _arch_wedge_log_norm2(new_rows, diag, precision)
        old = gram_det([list(map(_F, r)) for r in int_rows], diag)
        return (new_log - log_ball(old, precision)) * _F(1, 2)
    c = iota_finite_coeff(g, W, v)
    return log_ball(_F(v.prime), precision) * _F(c)


def iota_finite_coeff(g: GroupElement, W: SectionSubspace, v: Place) -> int:
    """The exact integer c with iota_v(g, [W]) = c log p at a finite place."""
    if W.dim == 0:
        raise ZeroSubspace("zero subspace")
    if v.is_archimedean():
        raise DomainError("finite place required")
    int_rows = scale_rows_to_int(W.basis)
    Wint = SectionSubspace(W.r, tuple(tuple(map(_F, r)) for r in int_rows))
    new_rows = _transformed_rows(Wint, g)
    p = v.prime
    val_new = _padic_wedge_valuation(new_rows, p)
    content = determinantal_divisor(int_rows)
    return int_valuation(content, p) - val_new


def iota_tilde(
    g: GroupElement,
    W: SectionSubspace,
    v: Place,
    m_values: Sequence[RealBall],
    precision: int = 128,
) -> RealBall:
    """iota at the determinant-1 rescaling g~ = g / theta: shifts by
    (dim W / 2) sum_i r_i m_v(a_i, x_i)."""
    base = iota_at(g, W, v, precision)
    shift = RealBall.exact(0)
    for ri, mv in zip(W.r, m_values):
        shift = shift + mv * _F(ri)
    return base + shift * _F(W.dim, 2)


def iota_bound_check(
    x,
    a_embedded,
    r: Sequence[int],
    t_x,
    t_a,
    v: Place,
    kernel_x: SectionSubspace,
    kernel_a: SectionSubspace,
    precision: int = 128,
) -> dict:
    """Instability measures at the explicit group element versus the stated
    upper bounds, including the archimedean error terms.

    Returns the measured iotas, the bounds, and slack; every verdict is a
    rigorous ball comparison (True means certainly within the bound).
    """
    n = len(r)
    g = group_element(x, a_embedded, v, precision)
    k_x, k_a = kernel_x.dim, kernel_a.dim
    arch = v.is_archimedean()
    logp = None if arch else log_ball(_F(v.prime), precision)
    mv = []
    evals = []  # finite places: m_v = e_i log p with exact integer e_i
    for xi, ai in zip(x, a_embedded):
        d = distance_v(xi, ai, v, precision)
        if isinstance(d, Fraction):
            if d == 0:
                raise CoincidentPoints("zero distance")
            if not arch:
                ei = int_valuation(d.denominator, v.prime) - int_valuation(
                    d.numerator, v.prime
                )
                evals.append(ei)
            d = RealBall.exact(d)
        if d.hi == 0:
            raise CoincidentPoints("zero distance")
        mv.append(-d.log(precision))

    iota_x = iota_at(g, kernel_x, v, precision)
    iota_a = iota_at(g, kernel_a, v, precision)
    sums = [comb.upper_coordinate_sum(r, t_x, i + 1) for i in range(n)]
    if arch:
        bound_x = RealBall.exact(0)
        for i in range(n):
            bound_x = bound_x - mv[i] * _F(sums[i])
        bound_x = bound_x + log_ball(_F(2), precision) * _F(k_x * sum(r))
        rm = [mv[i] * _F(r[i]) for i in range(n)]
        min_rm = rm[0]
        for t in rm[1:]:
            min_rm = RealBall(min(min_rm.lo, t.lo), min(min_rm.hi, t.hi))
        bound_a = -min_rm * _F(t_a) * _F(k_a)
        err = RealBall.exact(0)
        for ri in r:
            err = err + log_ball(_F(ri + 1), precision) * _F(1, 2)
        err = err * _F(k_a)
        err = err + log_ball(_F(3), precision) * _F(k_a * sum(r), 2)
        bound_a = bound_a + err
        ok_x = iota_x.le(bound_x)
        ok_a = iota_a.le(bound_a)
    else:
        # both sides are exact multiples of log p: compare the coefficients
        cx = iota_finite_coeff(g, kernel_x, v)
        ca = iota_finite_coeff(g, kernel_a, v)
        bx_coeff = -sum(s * e for s, e in zip(sums, evals))
        ba_coeff = -_F(t_a) * k_a * min(ri * e for ri, e in zip(r, evals))
        ok_x = cx <= bx_coeff
        ok_a = _F(ca) <= ba_coeff
        bound_x = logp * _F(bx_coeff)
        bound_a = logp * ba_coeff

    det_checks = [
        det_distance_identity(f, xi, ai, v, precision)
        for f, xi, ai in zip(g.factors, x, a_embedded)
    ]
    return {
        "inequality": "instability-measure-upper-bounds",
        "place": str(v),
        "iota_x": iota_x,
        "bound_x": bound_x,
        "slack_x": bound_x - iota_x,
        "verdict_x": ok_x,
        "iota_a": iota_a,
        "bound_a": bound_a,
        "slack_a": bound_a - iota_a,
        "verdict_a": ok_a,
        "det_distance_products": det_checks,
        "verdict": (ok_x is True) and (ok_a is True),
    }


# ---------------------------------------------------------------------------
# quotient lower bound and the permutation norm
# ---------------------------------------------------------------------------


def quotient_lb(b: Sequence[int], ranks: Sequence[int], slopes, precision: int = 128) -> RealBall:
    """sum b_i slope_i - (1/2) sum |b_i| log(rank_i)."""
    if not len(b) == len(ranks) == len(slopes):
        raise DomainError("length mismatch")
    if any(rk < 1 for rk in ranks):
        raise DomainError("ranks >= 1 required")
    total = RealBall.exact(0)
    for bi, rk, sl in zip(b, ranks, slopes):
        total = total + RealBall.exact(_F(sl)) * _F(bi)
        if rk > 1 and bi:
            total = total - log_ball(_F(rk), precision) * _F(abs(bi), 2)
    return total


def permutation_norm_check(
    e: Sequence[int], Db: Sequence[int], sigma, limit: int = 10**6
) -> dict:
    """Operator norm of the slot permutation eta(sigma) from the
    coordinate-max norm to l2, versus the bound sqrt(prod e_i^{Db_i}).

    The supremum is attained at the sum of all basis tensors; the l2
    isometry of eta(sigma) is verified exactly on the full basis.
    """
    if len(e) != len(Db) or len(e) != len(sigma):
        raise DomainError("e, Db, sigma must have equal length")
    size = math.prod(ei**dbi for ei, dbi in zip(e, Db))
    if size > limit:
        raise SizeLimit(f"{size} basis tensors exceed the configured bound")
    for si, dbi in zip(sigma, Db):
        if sorted(si) != list(range(dbi)):
            raise DomainError("each sigma_i must permute range(Db_i)")
    index_sets = [
        list(itertools.product(range(ei), repeat=dbi)) for ei, dbi in zip(e, Db)
    ]
    basis = list(itertools.product(*index_sets))

    def apply(R):
        return tuple(
            tuple(Ri[si[j]] for j in range(len(Ri))) for Ri, si in zip(R, sigma)
        )

    image = [apply(R) for R in basis]
    is_bijection = len(set(image)) == len(basis)
    # on T = sum of all basis tensors: eta(sigma) T = T, ||T||_2^2 = #basis,
    # max coordinate = 1, so the ratio attains sqrt(#basis)
    norm_sq = len(basis)
    bound_sq = size
    return {
        "inequality": "permutation-operator-norm",
        "l2_isometry": is_bijection,
        "norm_sq": norm_sq,
        "bound_sq": bound_sq,
        "norm": sqrt_ball(_F(norm_sq)),
        "bound": sqrt_ball(_F(bound_sq)),
        "verdict": is_bijection and norm_sq <= bound_sq,
        "equality": norm_sq == bound_sq,
    }
