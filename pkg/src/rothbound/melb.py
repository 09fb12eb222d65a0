"""End-to-end evaluators: the effective height lower bound, the main
comparison inequality with its displayed constants, and the parameter
pipeline that links them.

Everything is evaluated as rigorous balls over exact inputs; a verdict of
True means the inequality certainly holds at the working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import combinatorics as comb
from .ball import RealBall, log_ball
from .errors import DistanceZero, DomainError, HypothesisFailed, SSViolated
from .heights import ProjPoint, distance_v, height
from .instability import ss_condition
from .numberfield import NumberField, embeddings
from .places import Place

_F = Fraction


@dataclass
class ApproximationInstance:
    """One data set for the evaluators: couples (x_i, a_i), places, degrees.

    ``x`` are Q-points, ``a`` are points over ``number_field`` whose affine
    coordinates generate it; ``delta`` drives the parameter pipeline, while
    (t_a, t_x) feed the main comparison inequality directly.
    """

    number_field: NumberField
    places: tuple[Place, ...]
    r: tuple[int, ...]
    x: tuple[ProjPoint, ...]
    a: tuple[ProjPoint, ...]
    delta: Fraction | None = None
    t_a: object | None = None
    t_x: object | None = None
    precision: int = 128
    label: str = ""

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def q(self) -> int:
        return self.number_field.degree

    def validate(self, require_melb_ratios: bool = True) -> list[str]:
        """Checks every structural hypothesis; returns advisory notes."""
        notes = []
        if self.n < 2:
            raise HypothesisFailed("n >= 2 required")
        if len(self.x) != self.n or len(self.a) != self.n:
            raise HypothesisFailed("one couple (x_i, a_i) per factor required")
        if any(ri < 1 for ri in self.r):
            raise HypothesisFailed("positive degrees required")
        if self.q < 2:
            raise HypothesisFailed("field degree q >= 2 required")
        for i, (xi, ai) in enumerate(zip(self.x, self.a)):
            if not xi.is_rational_point():
                raise HypothesisFailed(f"x_{i+1} must be a Q-point")
            if ai.field != self.number_field:
                raise HypothesisFailed(f"a_{i+1} lives in the wrong field")
            alpha = ai.affine() if not _fe_zero(ai.x0) else None
            if alpha is None or not alpha.generates_field():
                raise HypothesisFailed(f"a_{i+1} does not generate the field")
            cross = xi.x0 * ai.x1 - xi.x1 * ai.x0
            if cross.is_zero():
                raise DistanceZero(f"x_{i+1} equals a_{i+1}")
        if self.delta is not None:
            d = _F(self.delta)
            if not 0 < d < _F(1, 2 * math.factorial(self.n)):
                raise HypothesisFailed("delta outside (0, 1/(2 n!))")
            if require_melb_ratios:
                R = comb.big_r(self.q, self.n, d, self.precision)
                Rb = R if isinstance(R, RealBall) else RealBall.exact(R)
                for i in range(self.n - 1):
                    ratio = _F(self.r[i], self.r[i + 1])
                    ok = Rb.lt(ratio)
                    if ok is not True:
                        raise HypothesisFailed(
                            f"degree ratio r_{i+1}/r_{i+2} = {ratio} not above the threshold",
                            {"threshold": Rb},
                        )
        for v in self.places:
            if v.is_archimedean():
                notes.append(
                    "archimedean place accepted in S; the effective bound is "
                    "stated for finite places and extends to this evaluation"
                )
            else:
                embs = embeddings(self.number_field, v, self.precision)
                if len(embs) != self.q:
                    raise HypothesisFailed(
                        f"place {v} carries {len(embs)} supported embeddings, need {self.q}"
                    )
        return notes


def _fe_zero(c) -> bool:
    return c.is_zero() if hasattr(c, "is_zero") else c == 0


@dataclass
class SideReport:
    inequality: str
    lhs: RealBall
    rhs: RealBall
    verdict: bool | None
    constants: dict
    per_place: list
    notes: list

    @property
    def slack(self) -> RealBall:
        return self.rhs - self.lhs


def _proximity_matrix(inst: ApproximationInstance, precision: int):
    """For each place: rows (one per embedding) of m_v(a_i^sigma, x_i) balls."""
    out = []
    for v in inst.places:
        embs = embeddings(inst.number_field, v, precision)
        rows = []
        for emb in embs:
            row = []
            for xi, ai in zip(inst.x, inst.a):
                ae = ai.embed(emb, precision)
                d = distance_v(xi, ae, v, precision)
                if isinstance(d, Fraction):
                    if d == 0:
                        raise DistanceZero("coincidence in C_v")
                    m = -log_ball(d, precision)
                else:
                    if d.hi <= 0:
                        raise DistanceZero("coincidence in C_v")
                    if d.lo <= 0:
                        raise HypothesisFailed("distance ball touches 0; raise precision")
                    m = -d.log(precision)
                row.append(m)
            rows.append(row)
        out.append((v, rows))
    return out


def _ball_min(balls):
    lo = min(b.lo for b in balls)
    hi = min(b.hi for b in balls)
    return RealBall(lo, hi)


def _ball_max(balls):
    lo = max(b.lo for b in balls)
    hi = max(b.hi for b in balls)
    return RealBall(lo, hi)


def melb_sides(inst: ApproximationInstance, precision: int | None = None) -> SideReport:
    """Both sides of the effective lower bound.

    LHS: t(delta) * sum_v min_sigma min_i r_i m_v(a_i^sigma, x_i).
    RHS: (1 + 2 q delta^(1/n)) sum r_i h(x_i) + (q/delta) sum r_i h(a_i)
         + (log sqrt(2q)/delta + log 8) |r|.
    """
    precision = precision or inst.precision
    if inst.delta is None:
        raise HypothesisFailed("delta required for this evaluator")
    notes = inst.validate(require_melb_ratios=True)
    q, n, r = inst.q, inst.n, inst.r
    delta = _F(inst.delta)

    t = comb.t_qn(q, n, delta, precision)
    tb = t if isinstance(t, RealBall) else RealBall.exact(t)
    per_place = []
    total = RealBall.exact(0)
    for v, rows in _proximity_matrix(inst, precision):
        per_sigma = [
            _ball_min([row[i] * _F(r[i]) for i in range(n)]) for row in rows
        ]
        inner = _ball_min(per_sigma)
        arg = min(range(len(per_sigma)), key=lambda k: per_sigma[k].mid)
        per_place.append(
            {"place": str(v), "value": inner, "attaining_embedding": arg}
        )
        total = total + inner
    lhs = tb * total

    hx = RealBall.exact(0)
    ha = RealBall.exact(0)
    for ri, xi, ai in zip(r, inst.x, inst.a):
        hx = hx + height(xi, precision) * _F(ri)
        ha = ha + height(ai, precision) * _F(ri)
    droot = RealBall.exact(delta).nth_root(n, precision)
    c_x = RealBall.exact(1) + droot * (2 * q)
    c_a = RealBall.exact(_F(q) / delta)
    c_r = log_ball(_F(2 * q), precision) * _F(1, 2) * (1 / delta) + log_ball(
        _F(8), precision
    )
    rhs = c_x * hx + c_a * ha + c_r * _F(sum(r))
    verdict = lhs.le(rhs)
    return SideReport(
        inequality="main-effective-lower-bound",
        lhs=lhs,
        rhs=rhs,
        verdict=verdict,
        constants={
            "t": tb,
            "coef_height_x": c_x,
            "coef_height_a": c_a,
            "coef_degree": c_r,
            "sum_r_h_x": hx,
            "sum_r_h_a": ha,
        },
        per_place=per_place,
        notes=notes,
    )


def main_theorem_sides(
    inst: ApproximationInstance, precision: int | None = None
) -> SideReport:
    """Both sides of the main comparison inequality with its displayed
    constants; requires the semi-stability condition to hold."""
    precision = precision or inst.precision
    if inst.t_a is None or inst.t_x is None:
        raise HypothesisFailed("t_a and t_x required for this evaluator")
    notes = inst.validate(require_melb_ratios=False)
    q, n, r = inst.q, inst.n, inst.r
    t_a, t_x = inst.t_a, inst.t_x

    ss = ss_condition(q, r, t_a, t_x, precision)
    if ss.value is not True:
        raise SSViolated(
            "semi-stability condition fails or is undecided",
            {"lhs": ss.lhs, "rhs": ss.rhs, "value": ss.value},
        )

    t_a_ball = t_a if isinstance(t_a, RealBall) else RealBall.exact(_F(t_a))
    t_x_ball = t_x if isinstance(t_x, RealBall) else RealBall.exact(_F(t_x))
    vol_ta = comb.vol_lower_ball(n, t_a_ball)
    u = comb.u_qr(q, r, t_a_ball, precision)
    u_ball = u if isinstance(u, RealBall) else RealBall.exact(u)
    vol_u = comb.vol_lower_ball(n, u_ball)
    mu_tx = comb.mu_ball(n, t_x_ball)
    vol_tx_upper = RealBall.exact(1) - comb.vol_lower_ball(n, t_x_ball)
    int_z1_up = comb.int_zeta1_upper_ball(n, t_x_ball)

    half_gap = (vol_u - mu_tx) * _F(1, 2)
    c1 = int_z1_up + half_gap * q
    c2 = vol_ta * q + half_gap * q
    c3 = (
        vol_u * log_ball(_F(6), precision) * _F(1, 2)
        + vol_tx_upper * log_ball(_F(8), precision) * _F(1, 2)
        + vol_ta * log_ball(_F(2 * q), precision) * _F(q, 2)
    )

    per_place = []
    total = RealBall.exact(0)
    for v, rows in _proximity_matrix(inst, precision):
        per_sigma = [
            _ball_min([row[i] * _F(r[i]) for i in range(n)]) for row in rows
        ]
        inner = _ball_max(per_sigma)
        arg = max(range(len(per_sigma)), key=lambda k: per_sigma[k].mid)
        per_place.append(
            {"place": str(v), "value": inner, "attaining_embedding": arg}
        )
        total = total + inner
    lhs = (RealBall.exact(1) - vol_ta * q) * t_a_ball * total

    hx = RealBall.exact(0)
    ha = RealBall.exact(0)
    for ri, xi, ai in zip(r, inst.x, inst.a):
        hx = hx + height(xi, precision) * _F(ri)
        ha = ha + height(ai, precision) * _F(ri)
    rhs = c1 * hx + c2 * ha * _F(q) + c3 * _F(sum(r))
    verdict = lhs.le(rhs)
    return SideReport(
        inequality="main-comparison-inequality",
        lhs=lhs,
        rhs=rhs,
        verdict=verdict,
        constants={
            "c1": c1,
            "c2": c2,
            "c3": c3,
            "vol_lower_t_a": vol_ta,
            "vol_lower_u": vol_u,
            "mu_t_x": mu_tx,
            "u": u_ball,
        },
        per_place=per_place,
        notes=notes,
    )


def melb_rhs_via_substitution(
    inst: ApproximationInstance, precision: int | None = None
) -> RealBall:
    """The RHS obtained from the main inequality by the parameter
    substitution (divided by delta to match the effective bound's scale);
    it is dominated by the effective bound's RHS on every valid instance."""
    precision = precision or inst.precision
    q, n, r = inst.q, inst.n, inst.r
    delta = _F(inst.delta)
    droot = RealBall.exact(delta).nth_root(n, precision)
    hx = RealBall.exact(0)
    ha = RealBall.exact(0)
    for ri, xi, ai in zip(r, inst.x, inst.a):
        hx = hx + height(xi, precision) * _F(ri)
        ha = ha + height(ai, precision) * _F(ri)
    log6h = log_ball(_F(6), precision) * _F(1, 2)
    log8h = log_ball(_F(8), precision) * _F(1, 2)
    log2qh = log_ball(_F(2 * q), precision) * _F(1, 2)
    c_qr = (
        log6h * (droot + 1) * delta
        + log8h * delta
        + log2qh * (1 - delta)
    )
    rhs_scaled = (
        hx * (RealBall.exact(1) + droot * _F(3 * q, 2)) * delta
        + ha * _F(q)
        + c_qr * _F(sum(r))
    )
    return rhs_scaled * (1 / delta)


def param_pipeline(q: int, n: int, delta, r, precision: int = 128) -> dict:
    """t_a, u_tilde, w plus the seven parameter estimates, all rigorous.

    Raises HypothesisFailed when delta or eps_{q,r} violate the standing
    hypotheses (delta in (0, 1/(2 n!)), eps < delta^(n+1)/n)."""
    delta = _F(delta)
    r = tuple(r)
    if not 0 < delta < _F(1, 2 * math.factorial(n)):
        raise HypothesisFailed("delta outside (0, 1/(2 n!))")
    eps = comb.eps_qr(q, r)
    droot = RealBall.exact(delta).nth_root(n, precision)
    eps_cap = droot * delta
    if eps_cap.gt(eps) is not True:
        raise HypothesisFailed(
            "eps_qr >= delta^(n+1)/n", {"eps": eps, "cap": eps_cap}
        )

    t_a = comb.t_qn(q, n, delta, precision)
    t_a_ball = t_a if isinstance(t_a, RealBall) else RealBall.exact(t_a)
    target = delta + eps  # exact volume of the lower set at u_tilde
    checks: dict[str, dict] = {}

    ok1 = target <= _F(1, math.factorial(n))
    checks["volume-at-u"] = {
        "statement": "vol_lower(u~) = delta + eps <= 1/n!",
        "value": target,
        "verdict": ok1,
    }
    if not ok1:
        raise HypothesisFailed("delta + eps exceeds 1/n!", {"value": target})
    u = comb.u_qr(q, r, None, precision, vol_t=(1 - delta) / q)
    u_ball = u if isinstance(u, RealBall) else RealBall.exact(u)
    mu_u = comb.mu_ball(n, u_ball)

    int_lower = (RealBall.exact(target) - mu_u) * _F(1, 2)
    cap2 = (RealBall.exact(target) ** (n + 1)).nth_root(n, precision) * _F(1, 2)
    checks["first-moment-at-u"] = {
        "statement": "int_{lower(u~)} zeta_1 <= (delta+eps)^((n+1)/n) / 2",
        "lhs": int_lower,
        "rhs": cap2,
        "verdict": int_lower.le(cap2),
    }
    checks["mu-above-eps"] = {
        "statement": "mu_n(u~) > eps",
        "lhs": mu_u,
        "rhs": eps,
        "verdict": mu_u.gt(eps),
    }
    ndelta_root = RealBall.exact(_F(math.factorial(n)) * delta).nth_root(n, precision)
    mu_cap = comb.mu_ball(n, ndelta_root) + eps
    checks["mu-upper-cap"] = {
        "statement": "mu_n(u~) <= eps + mu_n((n! delta)^(1/n))",
        "lhs": mu_u,
        "rhs": mu_cap,
        "verdict": mu_u.le(mu_cap),
    }
    if checks["mu-above-eps"]["verdict"] is not True:
        raise HypothesisFailed("mu_n(u~) <= eps blocks the w-solve")

    w = comb.w_qr(q, r, delta, precision)
    w_ball = w if isinstance(w, RealBall) else RealBall.exact(w)
    vol_up_w = RealBall.exact(1) - comb.vol_lower_ball(n, w_ball)
    checks["upper-volume-at-w"] = {
        "statement": "vol_upper(w) <= delta",
        "lhs": vol_up_w,
        "rhs": delta,
        "verdict": vol_up_w.le(delta),
    }
    int_up_w = comb.int_zeta1_upper_ball(n, w_ball)
    checks["first-moment-at-w"] = {
        "statement": "int_{upper(w)} zeta_1 <= delta",
        "lhs": int_up_w,
        "rhs": delta,
        "verdict": int_up_w.le(delta),
    }
    gap = RealBall.exact(target) - comb.mu_ball(n, w_ball)
    cap3 = droot * delta * 3
    checks["volume-mu-gap"] = {
        "statement": "vol_lower(u~) - mu_n(w) <= 3 delta^(n+1)/n",
        "lhs": gap,
        "rhs": cap3,
        "verdict": gap.le(cap3),
    }
    return {
        "t_a": t_a_ball,
        "u_tilde": u_ball,
        "w": w_ball,
        "eps": eps,
        "checks": checks,
        "all_passed": all(c["verdict"] is True for c in checks.values()),
    }
