"""Binary forms, tensorial rank, homogeneous Wronskians, and the
two-weight simultaneous-index verification in two variables.

The homogeneous Wronskian of rho degree-r forms is
((r-rho+1)!/r!)^rho det(d^{rho-1} f_l / dT0^{rho-j} dT1^{j-1});
it vanishes exactly when the forms are dependent, and for a section f of
bidegree r with rank decomposition f = sum f_{1k} (x) f_{2k} the bivariate
Wronskian determinant factors as Wr_1(f) (x) Wr_2(f).  Both routes are
computed exactly and compared whenever the factorization is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import combinatorics as comb
from .errors import (
    DegreeMismatch,
    DomainError,
    HypothesisFailed,
    InternalMismatch,
    ProjectionClash,
    ZeroForm,
    ZeroSection,
)
from .heights import ProjPoint
from .linalg import rref
from .numberfield import FieldElem
from .sections import MultiHomogPoly, _is_zero, index, index_inv_r

_F = Fraction


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form of the given degree in (T0, T1); coeffs[l] goes with
    T0^(degree-l) T1^l."""

    degree: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise DegreeMismatch("coefficient vector length must be degree + 1")

    @staticmethod
    def make(degree: int, coeffs) -> "BinaryForm":
        return BinaryForm(degree, tuple(coeffs))

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if self.degree != other.degree:
            raise DegreeMismatch("degrees differ")
        return BinaryForm(self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return BinaryForm(self.degree, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                if not _is_zero(b):
                    out[i + j] = out[i + j] + a * b
        return BinaryForm(self.degree + other.degree, tuple(out))

    def scale(self, s) -> "BinaryForm":
        return BinaryForm(self.degree, tuple(c * s for c in self.coeffs))

    def d_t0(self) -> "BinaryForm":
        if self.degree == 0:
            raise DomainError("cannot differentiate a constant form")
        return BinaryForm(
            self.degree - 1,
            tuple(self.coeffs[l] * (self.degree - l) for l in range(self.degree)),
        )

    def d_t1(self) -> "BinaryForm":
        if self.degree == 0:
            raise DomainError("cannot differentiate a constant form")
        return BinaryForm(
            self.degree - 1,
            tuple(self.coeffs[l + 1] * (l + 1) for l in range(self.degree)),
        )

    def mixed_partial(self, k0: int, k1: int) -> "BinaryForm":
        g = self
        for _ in range(k0):
            g = g.d_t0()
        for _ in range(k1):
            g = g.d_t1()
        return g

    def evaluate(self, z0, z1):
        acc = 0
        for l, c in enumerate(self.coeffs):
            if not _is_zero(c):
                acc = acc + c * z0 ** (self.degree - l) * z1**l
        return acc

    def transform(self, a, b, c, d) -> "BinaryForm":
        """Substitute T0 -> a T0 + b T1, T1 -> c T0 + d T1."""
        out = [0] * (self.degree + 1)
        p0 = BinaryForm(1, (a, b))
        p1 = BinaryForm(1, (c, d))
        acc = None
        for l, coef in enumerate(self.coeffs):
            if _is_zero(coef):
                continue
            term = BinaryForm(0, (coef,))
            for _ in range(self.degree - l):
                term = term * p0
            for _ in range(l):
                term = term * p1
            acc = term if acc is None else acc + term
        return acc if acc is not None else BinaryForm(self.degree, tuple(out))

    def __repr__(self):
        return f"BinaryForm(deg={self.degree}, {list(self.coeffs)})"


def multiplicity(g: BinaryForm, z: ProjPoint) -> int:
    """Order of vanishing of g at the point z, by exact factor division."""
    if g.is_zero():
        raise ZeroForm("multiplicity of the zero form is undefined")
    z0, z1 = z.x0, z.x1
    if _is_zero(z0):
        # vanishing order = power of T0
        top = max(l for l, c in enumerate(g.coeffs) if not _is_zero(c))
        return g.degree - top
    xi = z1 / z0
    # dehomogenize: p(x) = sum c_l x^l, multiplicity of the root xi
    p = list(g.coeffs)
    mult = 0
    while len(p) > 0:
        val = 0
        for c in reversed(p):
            val = val * xi + c
        if not _is_zero(val):
            return mult
        p = _synthetic_div(p, xi)
        mult += 1
    return mult


def _synthetic_div(p, xi):
    """p / (x - xi) given p(xi) = 0; returns the quotient coefficients."""
    n = len(p) - 1
    q = [0] * n
    acc = p[n]
    for i in range(n - 1, -1, -1):
        q[i] = acc
        acc = p[i] + acc * xi
    return q


@dataclass(frozen=True)
class RankDecomposition:
    rho: int
    left_factors: tuple[BinaryForm, ...]
    right_factors: tuple[BinaryForm, ...]


def tensor_rank(f: MultiHomogPoly) -> RankDecomposition:
    """Exact rank of the coefficient matrix plus a rank factorization."""
    if f.is_zero():
        raise ZeroSection("the zero section has no rank decomposition")
    if f.n != 2:
        raise DomainError("two factors required")
    r1, r2 = f.r
    m = [[_F(0)] * (r2 + 1) for _ in range(r1 + 1)]
    for (l1, l2), c in f.coeffs.items():
        m[l1][l2] = _F(c)
    red, pivots = rref(m)
    rho = len(red)
    left = tuple(
        BinaryForm.make(r1, [m[l1][p] for l1 in range(r1 + 1)]) for p in pivots
    )
    right = tuple(BinaryForm.make(r2, row) for row in red)
    rec = _reconstruct(f.r, left, right)
    if rec.coeffs != {k: _F(v) for k, v in f.coeffs.items()} and rec != f:
        raise InternalMismatch("rank factorization failed to reconstruct f")
    return RankDecomposition(rho, left, right)


def _reconstruct(r, left, right) -> MultiHomogPoly:
    coeffs: dict = {}
    for lf, rf in zip(left, right):
        for l1, a in enumerate(lf.coeffs):
            if _is_zero(a):
                continue
            for l2, b in enumerate(rf.coeffs):
                if _is_zero(b):
                    continue
                key = (l1, l2)
                s = coeffs.get(key, 0) + a * b
                if _is_zero(s):
                    coeffs.pop(key, None)
                else:
                    coeffs[key] = s
    return MultiHomogPoly.make(r, coeffs)


def _det(entries):
    """Determinant of a square matrix over any exact ring with +, *, neg.

    Laplace expansion along rows with minors memoized by column subset.
    """
    n = len(entries)
    memo: dict[int, object] = {}

    def minor(cols: int, row: int):
        if cols in memo:
            return memo[cols]
        cs = [c for c in range(n) if cols >> c & 1]
        if len(cs) == 1:
            memo[cols] = entries[row][cs[0]]
            return memo[cols]
        acc = None
        sign = 1
        for k, c in enumerate(cs):
            e = entries[row][c]
            if e is not None and not _entry_zero(e):
                sub = minor(cols & ~(1 << c), row + 1)
                term = e * sub
                if sign < 0:
                    term = -term
                acc = term if acc is None else acc + term
            sign = -sign
        memo[cols] = acc if acc is not None else None
        return memo[cols]

    full = (1 << n) - 1
    return minor(full, 0)


def _entry_zero(e) -> bool:
    if isinstance(e, MultiHomogPoly):
        return e.is_zero()
    if isinstance(e, BinaryForm):
        return e.is_zero()
    return _is_zero(e)


def wronskian_univ(forms: Sequence[BinaryForm]) -> BinaryForm:
    """Homogeneous Wronskian of rho forms of one degree r (rho <= r + 1)."""
    rho = len(forms)
    if rho == 0:
        raise DomainError("at least one form required")
    r = forms[0].degree
    if any(g.degree != r for g in forms):
        raise DegreeMismatch("all forms must share one degree")
    if rho > r + 1:
        raise DomainError("rho <= r + 1 required")
    if rho == 1:
        return forms[0]
    entries = [
        [forms[l].mixed_partial(rho - j, j - 1) for l in range(rho)]
        for j in range(1, rho + 1)
    ]
    det = _det(entries)
    deg = rho * (r - rho + 1)
    if det is None:
        return BinaryForm(deg, tuple([_F(0)] * (deg + 1)))
    norm = _F(math.factorial(r - rho + 1), math.factorial(r)) ** rho
    return det.scale(norm)


def wronskian_biv(f: MultiHomogPoly, dec: RankDecomposition | None = None):
    """(Wr_1, Wr_2) plus their tensor; asserts equality with the direct
    bivariate Wronskian determinant (InternalMismatch on failure)."""
    if f.is_zero():
        raise ZeroSection("the zero section has no Wronskian")
    if dec is None:
        dec = tensor_rank(f)
    rho = dec.rho
    r1, r2 = f.r
    wr1 = wronskian_univ(dec.left_factors)
    wr2 = wronskian_univ(dec.right_factors)
    product = _tensor_mhp(f.r, rho, wr1, wr2)
    direct = _wronskian_direct(f, rho)
    if product.coeffs != direct.coeffs:
        raise InternalMismatch("factored and direct Wronskians disagree")
    return wr1, wr2, product


def _tensor_mhp(r, rho, wr1: BinaryForm, wr2: BinaryForm) -> MultiHomogPoly:
    r1, r2 = r
    deg = (rho * (r1 - rho + 1), rho * (r2 - rho + 1))
    coeffs = {}
    for l1, a in enumerate(wr1.coeffs):
        if _is_zero(a):
            continue
        for l2, b in enumerate(wr2.coeffs):
            if not _is_zero(b):
                coeffs[(l1, l2)] = a * b
    return MultiHomogPoly.make(deg, coeffs)


def _wronskian_direct(f: MultiHomogPoly, rho: int) -> MultiHomogPoly:
    r1, r2 = f.r
    if rho == 1:
        return f
    entries = []
    for l1 in range(1, rho + 1):
        row = []
        for l2 in range(1, rho + 1):
            g = f
            for _ in range(rho - l1):
                g = g.partial(0, 0)
            for _ in range(l1 - 1):
                g = g.partial(0, 1)
            for _ in range(rho - l2):
                g = g.partial(1, 0)
            for _ in range(l2 - 1):
                g = g.partial(1, 1)
            row.append(g)
        entries.append(row)
    det = _det(entries)
    deg = (rho * (r1 - rho + 1), rho * (r2 - rho + 1))
    if det is None:
        return MultiHomogPoly.make(deg, {})
    norm = (
        _F(math.factorial(r1 - rho + 1), math.factorial(r1)) ** rho
        * _F(math.factorial(r2 - rho + 1), math.factorial(r2)) ** rho
    )
    return det.scale(norm)


# ---------------------------------------------------------------------------
# index bounds through the Wronskian
# ---------------------------------------------------------------------------


def _maybe_permute(f: MultiHomogPoly, z, b):
    """Permute the two factors so that r1 >= r2 (the bound has r2 = min r)."""
    if f.r[0] >= f.r[1]:
        return f, tuple(z), tuple(b), False
    swapped = MultiHomogPoly.make(
        (f.r[1], f.r[0]), {(l2, l1): c for (l1, l2), c in f.coeffs.items()}
    )
    return swapped, (z[1], z[0]), (b[1], b[0]), True


def wronskian_index_bound(f: MultiHomogPoly, z, b) -> dict:
    """Both sides of the Wronskian index lower bound at z with weight b.

    lhs = ind_b(Wr(f), z) computed from the actual Wronskian; rhs is
    max{b_i r_i} ((rho-1)(2 - (rho-1)/r2) vol(t) - rho eps), with
    t = min(1, ind_b(f, z)/max{b_i r_i}) and the two-factor eps.
    Coordinates are permuted to enforce r1 >= r2; the report records it.
    """
    if f.is_zero():
        raise ZeroSection("zero section")
    f, z, b, permuted = _maybe_permute(f, z, b)
    r1, r2 = f.r
    dec = tensor_rank(f)
    rho = dec.rho
    _, _, wr = wronskian_biv(f, dec)
    lhs = index(wr, z, b)
    bmax = max(_F(bi) * ri for bi, ri in zip(b, f.r))
    ind_f = index(f, z, b)
    t = min(_F(1), _F(ind_f) / bmax) if bmax > 0 else _F(0)
    eps = comb.eps_2d(2, f.r)
    rhs = bmax * (
        (rho - 1) * (2 - _F(rho - 1, r2)) * comb.vol_lower(2, t) - rho * eps
    )
    return {
        "inequality": "wronskian-index-lower-bound",
        "lhs": lhs,
        "rhs": rhs,
        "rho": rho,
        "t": t,
        "permuted": permuted,
        "verdict": lhs >= rhs,
    }


def _proj_distinct(pt_a, pt_b) -> bool:
    za = pt_a if isinstance(pt_a, ProjPoint) else ProjPoint(*pt_a)
    zb = pt_b if isinstance(pt_b, ProjPoint) else ProjPoint(*pt_b)
    return not za.same_as(zb)


def two_weight_dyson(f: MultiHomogPoly, targets, y, b, r) -> dict:
    """The two-weight simultaneous-index verification (n = 2).

    targets = [z^(1), ..., z^(q)] carry weight 1/r; the extra point y
    carries the weight b.  Checks the stated hypotheses, then evaluates
    the volume inequality with t^(0) = min(1, ind_b(f, y)/max b_i r_i)
    and the strict conclusion ind_b(f, y) < max{b_i r_i}.
    """
    if f.is_zero():
        raise ZeroSection("zero section")
    if tuple(r) != f.r:
        raise DomainError("section degree does not match r")
    q = len(targets)
    if q < 1:
        raise DomainError("at least one target required")
    for s in range(q):
        for tt in range(s + 1, q):
            for i in range(2):
                if not _proj_distinct(targets[s][i], targets[tt][i]):
                    raise ProjectionClash("targets share a factor projection")
        for i in range(2):
            if not _proj_distinct(targets[s][i], y[i]):
                raise ProjectionClash("a target shares a projection with y")
    inds = [index_inv_r(f, z) for z in targets]
    if any(t > 1 for t in inds):
        raise HypothesisFailed("an index at a target exceeds 1", {"indices": inds})
    eps = comb.eps_2d(q + 1, r)
    vol_sum = sum((comb.vol_lower(2, t) for t in inds), _F(0))
    margin = 1 - vol_sum + eps
    if not margin < _F(1, 2):
        raise HypothesisFailed(
            "1 - sum vol + eps >= 1/2", {"margin": margin, "indices": inds}
        )
    bmax = max(_F(bi) * ri for bi, ri in zip(b, r))
    ind_y = index(f, y, b)
    t0 = min(_F(1), _F(ind_y) / bmax)
    lhs_volume = comb.vol_lower(2, t0) + vol_sum
    volume_ok = lhs_volume <= 1 + eps
    strict_ok = ind_y < bmax
    conclusion_ok = comb.vol_lower(2, _F(ind_y) / bmax) <= margin if strict_ok else False
    return {
        "inequality": "two-weight-dyson",
        "target_indices": inds,
        "ind_y": ind_y,
        "b_max": bmax,
        "eps": eps,
        "volume_lhs": lhs_volume,
        "volume_rhs": 1 + eps,
        "volume_verdict": volume_ok,
        "strict_verdict": strict_ok,
        "conclusion_verdict": conclusion_ok,
        "verdict": volume_ok and strict_ok and conclusion_ok,
    }
