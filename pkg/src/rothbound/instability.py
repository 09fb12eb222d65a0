"""One-parameter subgroups of SL_2^n in diagonal normal form, weight
filtrations of section subspaces, instability coefficients, and the
semi-stability condition checkers.

Sign convention: a 1-PS acts on the adapted dual basis by
T_{i0} -> tau^{m_i} T_{i0}, T_{i1} -> tau^{-m_i} T_{i1}; the adapted
monomial with exponent l carries weight sum_i m_i (r_i - 2 l_i), and the
instability coefficient of a line [f] is minus the minimal weight of a
nonzero component (so lambda(tau) f = tau^{-mu} f_min + higher order).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import combinatorics as comb
from .ball import RealBall, sqrt_ball
from .errors import (
    DegenerateIntersection,
    DomainError,
    HypothesisFailed,
    InternalMismatch,
    ZeroSection,
    ZeroSubspace,
)
from .heights import ProjPoint
from .linalg import graded_rank_jumps, scale_rows_to_int
from .sections import (
    MultiHomogPoly,
    SectionSubspace,
    box_monomials,
    index,
    substitute,
)

_F = Fraction

_ID = (_F(1), _F(0), _F(0), _F(1))


@dataclass(frozen=True)
class OneParamSubgroup:
    """Weights m_i >= 0 plus per-factor adapted dual bases.

    ``bases[i]`` is an invertible 2x2 matrix whose rows are the adapted
    forms (T_{i0}, T_{i1}) written in the standard dual basis.
    """

    m: tuple[int, ...]
    bases: tuple[tuple[tuple[Fraction, ...], ...], ...] | None = None

    def __post_init__(self):
        if any(mi < 0 for mi in self.m):
            raise DomainError("nonnegative weights required")
        if self.bases is not None:
            if len(self.bases) != len(self.m):
                raise DomainError("one basis per factor required")
            for b in self.bases:
                if b[0][0] * b[1][1] - b[0][1] * b[1][0] == 0:
                    raise DomainError("adapted basis must be invertible")

    @staticmethod
    def standard(m: Sequence[int]) -> "OneParamSubgroup":
        return OneParamSubgroup(tuple(int(x) for x in m))

    @staticmethod
    def with_bases(m: Sequence[int], bases) -> "OneParamSubgroup":
        norm = tuple(
            tuple(tuple(_F(x) for x in row) for row in b) for b in bases
        )
        return OneParamSubgroup(tuple(int(x) for x in m), norm)

    @property
    def n(self) -> int:
        return len(self.m)

    def basis_matrix(self, i: int):
        if self.bases is None:
            return ((_F(1), _F(0)), (_F(0), _F(1)))
        return self.bases[i]

    def to_adapted_mats(self) -> list[tuple]:
        """Substitutions expressing standard forms in the adapted ones."""
        mats = []
        for i in range(self.n):
            (a, b), (c, d) = self.basis_matrix(i)
            det = a * d - b * c
            # [T0;T1] = B^{-1} [Ti0; Ti1]
            mats.append((d / det, -b / det, -c / det, a / det))
        return mats

    def weight_of(self, l: Sequence[int], r: Sequence[int]) -> int:
        return sum(mi * (ri - 2 * li) for mi, ri, li in zip(self.m, r, l))

    def instability_point(self) -> tuple[ProjPoint, ...]:
        """The common zero locus of the adapted T_{i0} forms."""
        pts = []
        for i in range(self.n):
            (a, b), _ = self.basis_matrix(i)
            pts.append(ProjPoint.rational(b, -a) if (b, a) != (0, 0) else None)
        return tuple(pts)

    def chi(self, x: Sequence[ProjPoint]) -> tuple[int, ...]:
        """chi_i(x) = 1 iff T_{i0} vanishes at x_i (0 when m_i = 0)."""
        out = []
        for i, xi in enumerate(x):
            if self.m[i] == 0:
                out.append(0)
                continue
            (a, b), _ = self.basis_matrix(i)
            z0, z1 = (xi.x0, xi.x1) if isinstance(xi, ProjPoint) else xi
            v = a * z0 + b * z1
            vanish = v.is_zero() if hasattr(v, "is_zero") else v == 0
            out.append(1 if vanish else 0)
        return tuple(out)

    def p_min(self, r: Sequence[int]) -> int:
        return -sum(mi * ri for mi, ri in zip(self.m, r))

    def p_max(self, r: Sequence[int]) -> int:
        return sum(mi * ri for mi, ri in zip(self.m, r))


@dataclass(frozen=True)
class InstabilityReport:
    mu: int
    filtration_dims: dict[int, int]
    graded_dims: dict[int, int]
    p_min: int
    p_max: int

    def check_consistency(self, dim: int) -> bool:
        """mu must equal -p_min*dim - sum_{p > p_min} dim W[p]."""
        total = -self.p_min * dim
        for p in range(self.p_min + 1, self.p_max + 1):
            total -= self.filtration_dims.get(p, 0)
        return total == self.mu


def _adapted_int_matrix(lam: OneParamSubgroup, W: SectionSubspace):
    mons = box_monomials(W.r)
    if lam.bases is None:
        rows = W.basis
    else:
        mats = lam.to_adapted_mats()
        polys = W.polys()
        rows = [substitute(p, mats).to_vector(mons) for p in polys]
    return scale_rows_to_int(rows), [lam.weight_of(l, W.r) for l in mons]


def instab_subspace(lam: OneParamSubgroup, W: SectionSubspace) -> InstabilityReport:
    """Instability coefficient and weight filtration of a subspace."""
    if W.dim == 0:
        raise ZeroSubspace("instability of the zero subspace is undefined")
    int_rows, weights = _adapted_int_matrix(lam, W)
    jumps = graded_rank_jumps(int_rows, weights)
    mu = -sum(w * k for w, k in jumps.items())
    p_min, p_max = lam.p_min(W.r), lam.p_max(W.r)
    filtration = {}
    for p in range(p_min, p_max + 1):
        filtration[p] = sum(k for w, k in jumps.items() if w >= p)
    rep = InstabilityReport(mu, filtration, dict(jumps), p_min, p_max)
    if not rep.check_consistency(W.dim):
        raise InternalMismatch("filtration dimensions do not reproduce mu")
    return rep


def minimal_weight_basis_mu(lam: OneParamSubgroup, W: SectionSubspace) -> int:
    """mu via a basis whose minimal-weight components are independent.

    Independent route used as a cross-check: echelonize with columns in
    ascending weight order; each pivot row's minimal component sits in its
    pivot weight class and the classes are independent by construction.
    """
    if W.dim == 0:
        raise ZeroSubspace("instability of the zero subspace is undefined")
    int_rows, weights = _adapted_int_matrix(lam, W)
    order = sorted(range(len(weights)), key=lambda c: weights[c])
    m = [list(r) for r in int_rows]
    used = [False] * len(m)
    total = 0
    for c in order:
        pr = next((i for i in range(len(m)) if not used[i] and m[i][c] != 0), None)
        if pr is None:
            continue
        used[pr] = True
        total += weights[c]
        piv = m[pr][c]
        for i in range(len(m)):
            if not used[i] and m[i][c] != 0:
                f_ = m[i][c]
                m[i] = [a * piv - f_ * b for a, b in zip(m[i], m[pr])]
    if not all(used):
        raise InternalMismatch("basis rows were not independent")
    return -total


def instab_kernel_closed_form(
    lam: OneParamSubgroup, x, r: Sequence[int], t_x
) -> int:
    """mu(lambda, [K_r(x, t_x)]) by the closed formula
    sum_i (-1)^chi_i m_i mu^Z_{r,i}(t_x)."""
    chi = lam.chi(x)
    total = 0
    for i in range(len(r)):
        if lam.m[i] == 0:
            continue
        total += (-1) ** chi[i] * lam.m[i] * comb.mu_z(r, i + 1, t_x)
    return total


def instab_line_via_index(lam: OneParamSubgroup, f: MultiHomogPoly) -> int:
    """mu(lambda, [f]) two ways: graded minimal weight, and
    <m, r> - 2 ind_m(f, y_lambda); raises InternalMismatch if they differ."""
    if f.is_zero():
        raise ZeroSection("the zero section spans no line")
    r = f.r
    if lam.bases is None:
        g = f
    else:
        g = substitute(f, lam.to_adapted_mats())
    wmin = min(lam.weight_of(l, r) for l in g.coeffs)
    mu_graded = -wmin
    y = lam.instability_point()
    ind = index(f, y, tuple(_F(mi) for mi in lam.m))
    mu_index = sum(mi * ri for mi, ri in zip(lam.m, r)) - 2 * ind
    if mu_graded != mu_index:
        raise InternalMismatch(
            f"graded route gives {mu_graded}, index route gives {mu_index}"
        )
    return mu_graded


# ---------------------------------------------------------------------------
# verdicts and the semi-stability conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Three-valued outcome of a rigorous strict-inequality test."""

    value: bool | None
    precision: int
    lhs: RealBall | None = None
    rhs: RealBall | None = None

    def __bool__(self):
        return self.value is True

    @property
    def unknown(self) -> bool:
        return self.value is None

    def as_json(self):
        return {True: "true", False: "false", None: "unknown"}[self.value]


def _as_ball(x) -> RealBall:
    return x if isinstance(x, RealBall) else RealBall.exact(_F(x))


def ss_condition(q: int, r: Sequence[int], t_a, t_x, precision: int = 128) -> Verdict:
    """Strict inequality mu_n(u_{q,r}(t_a)) > mu_n(t_x) + eps_{q,r}."""
    n = len(r)
    u = comb.u_qr(q, r, _as_ball(t_a) if isinstance(t_a, RealBall) else _F(t_a), precision)
    mu_u = comb.mu_ball(n, _as_ball(u))
    mu_tx = comb.mu_ball(n, _as_ball(t_x))
    rhs = mu_tx + comb.eps_qr(q, r)
    return Verdict(mu_u.gt(rhs), precision, mu_u, rhs)


def ss_condition_2d(q: int, r: Sequence[int], t_a, t_x, precision: int = 128) -> Verdict:
    """The n = 2 criterion:
    mu_2(t_x) < (1 - q vol(t_a)) (1 - 2 sqrt(2 (1 - q vol(t_a) + eps_{q+1,r}))),
    with the two-factor eps variant; requires r1 >= r2 and the bracket
    1 - q vol(t_a) + eps_{q+1,r} inside [0, 1/2]."""
    if len(r) != 2 or r[0] < r[1]:
        raise DomainError("r = (r1, r2) with r1 >= r2 required")
    vol_ta = (
        comb.vol_lower_ball(2, t_a)
        if isinstance(t_a, RealBall)
        else RealBall.exact(comb.vol_lower(2, _F(t_a)))
    )
    eps = comb.eps_2d(q + 1, r)
    delta = RealBall.exact(1) - q * vol_ta
    bracket = delta + eps
    in_range = None
    if bracket.lo >= 0 and bracket.hi <= _F(1, 2):
        in_range = True
    elif bracket.hi < 0 or bracket.lo > _F(1, 2):
        in_range = False
    if in_range is not True:
        raise HypothesisFailed(
            "bracket 1 - q vol(t_a) + eps outside [0, 1/2]",
            {"bracket": bracket},
        )
    root = (bracket * 2).sqrt(precision)
    rhs = delta * (RealBall.exact(1) - 2 * root)
    mu_tx = comb.mu_ball(2, _as_ball(t_x))
    return Verdict(mu_tx.lt(rhs), precision, mu_tx, rhs)


def grassmann_inequality_check(
    lam: OneParamSubgroup, w1: SectionSubspace, w2: SectionSubspace
) -> dict:
    """mu[W1] + mu[W2] >= mu[W1+W2] + mu[W1 cap W2], all four exact."""
    inter = w1.intersection(w2)
    if inter.dim == 0:
        raise DegenerateIntersection("W1 and W2 intersect trivially")
    total = w1.sum(w2)
    mus = {
        "w1": instab_subspace(lam, w1).mu,
        "w2": instab_subspace(lam, w2).mu,
        "sum": instab_subspace(lam, total).mu,
        "intersection": instab_subspace(lam, inter).mu,
    }
    ok = mus["w1"] + mus["w2"] >= mus["sum"] + mus["intersection"]
    return {"inequality": "grassmann-superadditivity", "mu": mus, "verdict": ok}


def inclusion_inequality_check(
    lam: OneParamSubgroup, w1: SectionSubspace, w2: SectionSubspace
) -> dict:
    """For W1 inside W2: mu[W1] >= mu[W2] - p_min (dim W1 - dim W2)."""
    if w1.dim == 0:
        raise ZeroSubspace("W1 must be nonzero")
    if w1.sum(w2).dim != w2.dim:
        raise DomainError("W1 is not contained in W2")
    m1 = instab_subspace(lam, w1).mu
    m2 = instab_subspace(lam, w2).mu
    p_min = lam.p_min(w1.r)
    ok = m1 >= m2 - p_min * (w1.dim - w2.dim)
    return {"inequality": "inclusion-monotonicity", "mu1": m1, "mu2": m2, "verdict": ok}
