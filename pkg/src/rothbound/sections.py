"""Multihomogeneous sections on (P^1)^n: exact index computation, kernels
of jet-evaluation maps at rational and at conjugate algebraic points, and
the volume inequality check for simultaneous indices.

A section of multidegree r is stored as an exponent-vector -> coefficient
map; the exponent l_i is the power of T_{i1} (so the monomial is
prod T_{i0}^{r_i - l_i} T_{i1}^{l_i}).  Coefficients are Fractions, ints,
or FieldElems of one shared number field; all arithmetic is exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import combinatorics as comb
from .errors import (
    DomainError,
    PrecisionExhausted,
    ProjectionClash,
    SizeLimit,
    ZeroSection,
)
from .heights import ProjPoint
from .linalg import nullspace, rref
from .numberfield import FieldElem

_F = Fraction

INF = math.inf


def inv_weights(r: Sequence[int]) -> tuple[Fraction, ...]:
    """The weight 1/r = (1/r_1, ..., 1/r_n)."""
    return tuple(_F(1, ri) for ri in r)


def _is_zero(c) -> bool:
    if isinstance(c, FieldElem):
        return c.is_zero()
    return c == 0


@dataclass(frozen=True)
class MultiHomogPoly:
    r: tuple[int, ...]
    coeffs: dict

    def __post_init__(self):
        for l, c in self.coeffs.items():
            if len(l) != len(self.r) or any(
                not 0 <= li <= ri for li, ri in zip(l, self.r)
            ):
                raise DomainError(f"exponent {l} outside the box for r={self.r}")
            if _is_zero(c):
                raise DomainError("zero coefficients must be absent")

    @staticmethod
    def make(r: Sequence[int], coeffs: dict) -> "MultiHomogPoly":
        clean = {tuple(l): c for l, c in coeffs.items() if not _is_zero(c)}
        return MultiHomogPoly(tuple(r), clean)

    @staticmethod
    def monomial(r: Sequence[int], l: Sequence[int], c=1) -> "MultiHomogPoly":
        return MultiHomogPoly.make(r, {tuple(l): _F(c) if isinstance(c, int) else c})

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def n(self) -> int:
        return len(self.r)

    def __add__(self, other: "MultiHomogPoly") -> "MultiHomogPoly":
        if self.r != other.r:
            raise DomainError("multidegrees differ")
        out = dict(self.coeffs)
        for l, c in other.coeffs.items():
            s = out.get(l, 0) + c
            if _is_zero(s):
                out.pop(l, None)
            else:
                out[l] = s
        return MultiHomogPoly(self.r, out)

    def __neg__(self):
        return MultiHomogPoly(self.r, {l: -c for l, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "MultiHomogPoly":
        if _is_zero(s):
            return MultiHomogPoly(self.r, {})
        return MultiHomogPoly(self.r, {l: c * s for l, c in self.coeffs.items()})

    def __mul__(self, other: "MultiHomogPoly") -> "MultiHomogPoly":
        """Product section; multidegrees add."""
        if self.n != other.n:
            raise DomainError("factor counts differ")
        r = tuple(a + b for a, b in zip(self.r, other.r))
        out: dict = {}
        for l1, c1 in self.coeffs.items():
            for l2, c2 in other.coeffs.items():
                l = tuple(a + b for a, b in zip(l1, l2))
                s = out.get(l, 0) + c1 * c2
                if _is_zero(s):
                    out.pop(l, None)
                else:
                    out[l] = s
        return MultiHomogPoly(r, out)

    def partial(self, i: int, var: int) -> "MultiHomogPoly":
        """d/dT_{i,var}; lowers the i-th degree by one."""
        if self.r[i] == 0:
            raise DomainError("degree 0 factor cannot be differentiated")
        r = tuple(ri - 1 if j == i else ri for j, ri in enumerate(self.r))
        out: dict = {}
        for l, c in self.coeffs.items():
            if var == 1:
                if l[i] == 0:
                    continue
                nl = tuple(li - 1 if j == i else li for j, li in enumerate(l))
                nc = c * l[i]
            else:
                e0 = self.r[i] - l[i]
                if e0 == 0:
                    continue
                nl = l
                nc = c * e0
            out[nl] = out.get(nl, 0) + nc
        return MultiHomogPoly.make(r, out)

    def to_vector(self, monomials: Sequence[tuple[int, ...]]) -> tuple:
        return tuple(self.coeffs.get(l, _F(0)) for l in monomials)

    def __repr__(self):
        terms = ", ".join(f"{l}:{c}" for l, c in sorted(self.coeffs.items()))
        return f"MultiHomogPoly(r={self.r}, {{{terms}}})"


def box_monomials(r: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Coordinate order for the monomial basis: lexicographic over the box."""
    return tuple(itertools.product(*(range(ri + 1) for ri in r)))


def from_vector(r: Sequence[int], monomials, vec) -> MultiHomogPoly:
    return MultiHomogPoly.make(r, dict(zip(monomials, vec)))


# ---------------------------------------------------------------------------
# linear substitutions, one factor at a time
# ---------------------------------------------------------------------------


def substitute(f: MultiHomogPoly, mats: Sequence[tuple]) -> MultiHomogPoly:
    """Replace per-factor variables: V_{i0} -> a W_0 + b W_1, V_{i1} -> c W_0 + d W_1.

    mats[i] = (a, b, c, d).  The result has the same multidegree in the new
    variables; all expansion is exact.
    """
    if len(mats) != f.n:
        raise DomainError("one 2x2 matrix per factor required")
    coeffs = f.coeffs
    for i, (a, b, c, d) in enumerate(mats):
        ri = f.r[i]
        rows = _factor_rows(a, b, c, d, ri)
        out: dict = {}
        for l, coeff in coeffs.items():
            for m, w in enumerate(rows[l[i]]):
                if _is_zero(w):
                    continue
                nl = l[:i] + (m,) + l[i + 1 :]
                s = out.get(nl, 0) + coeff * w
                if _is_zero(s):
                    out.pop(nl, None)
                else:
                    out[nl] = s
        coeffs = out
    return MultiHomogPoly(f.r, coeffs)


def _factor_rows(a, b, c, d, ri: int):
    """rows[l][m] = coefficient of W_0^{ri-m} W_1^m in (aW0+bW1)^{ri-l} (cW0+dW1)^l."""
    pow_ab = _binom_powers(a, b, ri)
    pow_cd = _binom_powers(c, d, ri)
    rows = []
    for l in range(ri + 1):
        p = _convolve(pow_ab[ri - l], pow_cd[l])
        rows.append(p)
    return rows


def _binom_powers(a, b, up_to: int):
    """For each e <= up_to, the coefficient list of (a W0 + b W1)^e in powers of W1."""
    out = [[1]]
    cur = [1]
    for _ in range(up_to):
        nxt = [0] * (len(cur) + 1)
        for m, c in enumerate(cur):
            if not _is_zero(c):
                ca = c * a
                cb = c * b
                if not _is_zero(ca):
                    nxt[m] = nxt[m] + ca
                if not _is_zero(cb):
                    nxt[m + 1] = nxt[m + 1] + cb
        cur = nxt
        out.append(cur)
    return out


def _convolve(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if _is_zero(a):
            continue
        for j, b in enumerate(q):
            if not _is_zero(b):
                out[i + j] = out[i + j] + a * b
    return out


def _point_pair(z):
    """(z0, z1) for a ProjPoint or a raw coordinate pair."""
    if isinstance(z, ProjPoint):
        return z.x0, z.x1
    return z


def expansion_mats(points) -> list[tuple]:
    """Substitution matrices moving each factor to local coordinates at z_i
    (U_1 vanishes at z_i): T0 -> U0, T1 -> xi U0 + U1, or the swap at (0:1)."""
    mats = []
    for z in points:
        z0, z1 = _point_pair(z)
        if _is_zero(z0):
            mats.append((0, 1, 1, 0))
        else:
            xi = z1 / z0
            mats.append((1, 0, xi, 1))
    return mats


def basis_mats(points) -> list[tuple]:
    """Inverse substitutions: express local monomials in standard coordinates."""
    mats = []
    for z in points:
        z0, z1 = _point_pair(z)
        if _is_zero(z0):
            mats.append((0, 1, 1, 0))
        else:
            xi = z1 / z0
            mats.append((1, 0, -xi, 1))
    return mats


# ---------------------------------------------------------------------------
# index
# ---------------------------------------------------------------------------


def index(f: MultiHomogPoly, z, b: Sequence[Fraction], precision: int = 0):
    """ind_b(f, z): minimal b-weighted local exponent sum; +inf for f = 0.

    z is an n-tuple of points with exact coordinates (Q or one number
    field).  Ball-coordinate points are rejected here; exact arithmetic in
    the field is the supported path.
    """
    if f.is_zero():
        return INF
    if len(z) != f.n or len(b) != f.n:
        raise DomainError("point tuple and weight length must match the factors")
    g = substitute(f, expansion_mats(z))
    best = None
    for l in g.coeffs:
        val = sum((_F(bi) * li for bi, li in zip(b, l)), _F(0))
        if best is None or val < best:
            best = val
    return best


def index_inv_r(f: MultiHomogPoly, z) -> Fraction:
    return index(f, z, inv_weights(f.r))


# ---------------------------------------------------------------------------
# subspaces and kernels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectionSubspace:
    """A Q-subspace of the degree-r sections, stored as the canonical RREF
    basis in the lexicographic monomial coordinates."""

    r: tuple[int, ...]
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return math.prod(ri + 1 for ri in self.r)

    def monomials(self):
        return box_monomials(self.r)

    def polys(self) -> list[MultiHomogPoly]:
        mons = self.monomials()
        return [from_vector(self.r, mons, row) for row in self.basis]

    @staticmethod
    def from_rows(r, rows) -> "SectionSubspace":
        red, _ = rref(rows)
        return SectionSubspace(tuple(r), red)

    @staticmethod
    def from_polys(r, polys) -> "SectionSubspace":
        mons = box_monomials(r)
        return SectionSubspace.from_rows(r, [p.to_vector(mons) for p in polys])

    def sum(self, other: "SectionSubspace") -> "SectionSubspace":
        if self.r != other.r:
            raise DomainError("multidegrees differ")
        return SectionSubspace.from_rows(self.r, list(self.basis) + list(other.basis))

    def intersection(self, other: "SectionSubspace") -> "SectionSubspace":
        from .linalg import row_space_intersection

        if self.r != other.r:
            raise DomainError("multidegrees differ")
        rows = row_space_intersection(self.basis, other.basis, self.ambient_dim)
        return SectionSubspace(self.r, rows)

    def contains(self, f: MultiHomogPoly) -> bool:
        vec = list(f.to_vector(self.monomials()))
        for row in self.basis:
            piv = next(i for i, x in enumerate(row) if x == 1)
            c = vec[piv]
            if c:
                vec = [a - c * b for a, b in zip(vec, row)]
        return all(x == 0 for x in vec)


def _check_lattice(r, limit=None):
    size = math.prod(ri + 1 for ri in r)
    if size > (limit or comb.LATTICE_SIZE_LIMIT):
        raise SizeLimit(f"{size} monomials exceed the configured bound")


def kernel_single(z, r: Sequence[int], t, limit=None) -> SectionSubspace:
    """Sections with ind_{1/r}(f, z) >= t at one Q-point tuple z.

    The basis is the local monomial family pushed back to standard
    coordinates; its dimension is the upper lattice count.
    """
    r = tuple(r)
    t = _F(t)
    if t < 0:
        raise DomainError("t >= 0 required")
    _check_lattice(r, limit)
    mats = basis_mats(z)
    mons = box_monomials(r)
    rows = []
    for l in comb.lattice_points(r, t, "upper", limit):
        section = substitute(MultiHomogPoly.monomial(r, l), mats)
        rows.append(section.to_vector(mons))
    return SectionSubspace.from_rows(r, rows)


def kernel_conjugates(a, r: Sequence[int], t, limit=None) -> SectionSubspace:
    """Q-rational sections whose index at the algebraic point tuple a is >= t.

    Each coordinate of a must generate its number field (checked); every
    K'-linear jet condition turns into deg(K') rational conditions via
    restriction of scalars.
    """
    from .errors import NotGenerating

    r = tuple(r)
    t = _F(t)
    _check_lattice(r, limit)
    field = None
    for zi in a:
        z0, z1 = _point_pair(zi)
        if not isinstance(z0, FieldElem) and not isinstance(z1, FieldElem):
            raise NotGenerating("rational coordinate cannot generate the field")
        fld = z0.field if isinstance(z0, FieldElem) else z1.field
        if field is None:
            field = fld
        elif field != fld:
            raise DomainError("all coordinates must live in one number field")
        if _is_zero(z0):
            raise NotGenerating("(0:1) is rational")
        xi = z1 / z0 if isinstance(z1, FieldElem) else fld.from_rational(z1) / z0
        if not (isinstance(xi, FieldElem) and xi.generates_field()):
            raise NotGenerating("affine coordinate does not generate the field")
    q = field.degree
    mats = expansion_mats(a)
    mons = box_monomials(r)
    conditions = []
    lower = set(comb.lattice_points(r, t, "lower", limit))
    if lower:
        for lmon in mons:
            expanded = substitute(MultiHomogPoly.monomial(r, lmon), mats)
            col = {}
            for m, c in expanded.coeffs.items():
                if m in lower:
                    col[m] = c
            conditions.append(col)
        rows = []
        for m in sorted(lower):
            for k in range(q):
                row = []
                for j, _lmon in enumerate(mons):
                    c = conditions[j].get(m)
                    if c is None:
                        row.append(_F(0))
                    elif isinstance(c, FieldElem):
                        row.append(c.coords[k])
                    else:
                        row.append(_F(c) if k == 0 else _F(0))
                rows.append(row)
        basis = nullspace(rows, len(mons))
    else:
        basis = rref([tuple(_F(1) if i == j else _F(0) for i in range(len(mons))) for j in range(len(mons))])[0]
    return SectionSubspace(r, basis)


# ---------------------------------------------------------------------------
# the simultaneous-index volume bound
# ---------------------------------------------------------------------------


def _projections_distinct(points) -> bool:
    n = len(points[0])
    for s, tt in itertools.combinations(range(len(points)), 2):
        for i in range(n):
            zi = _as_proj(points[s][i])
            wi = _as_proj(points[tt][i])
            if zi.same_as(wi):
                return False
    return True


def _as_proj(z) -> ProjPoint:
    if isinstance(z, ProjPoint):
        return z
    return ProjPoint(*z)


def dyson_check(f: MultiHomogPoly, points, r: Sequence[int]) -> dict:
    """Evaluate both sides of the simultaneous-index volume bound.

    points = [z^(0), ..., z^(q)] with pairwise distinct factor projections.
    A False verdict is flagged as an internal-consistency failure: the
    inequality is a theorem for well-formed inputs.
    """
    if f.is_zero():
        raise ZeroSection("the zero section has no index data")
    if tuple(r) != f.r:
        raise DomainError("section multidegree does not match r")
    if not points:
        raise DomainError("at least one point required")
    if not _projections_distinct(points):
        raise ProjectionClash("two points share a factor projection")
    n = f.n
    q = len(points) - 1
    indices = [index_inv_r(f, z) for z in points]
    lhs = sum((comb.vol_lower(n, min(_F(t), n)) for t in indices), _F(0))
    eps = comb.eps_qr(q, r) if q >= 1 else _F(0)
    rhs = 1 + eps
    ok = lhs <= rhs
    return {
        "inequality": "dyson-volume-bound",
        "indices": indices,
        "lhs": lhs,
        "rhs": rhs,
        "eps": eps,
        "verdict": ok,
        "internal_consistency_failure": not ok,
    }
