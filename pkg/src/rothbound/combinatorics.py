"""Volume and threshold combinatorics on the unit cube.

Everything is materialized as exact piecewise polynomials over Q with
integer breakpoints, cached once per dimension n:

* ``vol_lower(n, t)``: Lebesgue volume of {zeta in [0,1]^n : sum zeta_i < t};
* ``mu(n, t)``: the signed first-coordinate moment int_{sum >= t} (2 zeta_1 - 1);
* inversions ``t_qn``, ``u_qr``, ``w_qr`` (exact rationals when the active
  piece solves in degree <= 2 with a rational root, rigorous balls otherwise);
* the lattice sets and their signed coordinate sums.

Conventions: the "lower" set is the strict sublevel set sum < t, the
"upper" set is sum >= t; both are intersected with the box prod [0, r_i]
for the integer-scaled variants.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .ball import RealBall, _exact_sqrt
from .errors import DomainError, HypothesisFailed, SizeLimit

_F = Fraction

LATTICE_SIZE_LIMIT = 10**7


# ---------------------------------------------------------------------------
# exact piecewise polynomials
# ---------------------------------------------------------------------------


def _poly_eval(coeffs: Sequence[Fraction], t: Fraction) -> Fraction:
    acc = _F(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _poly_eval_ball(coeffs: Sequence[Fraction], t: RealBall) -> RealBall:
    acc = RealBall.exact(0)
    for c in reversed(coeffs):
        acc = acc * t + RealBall.exact(c)
    return acc


def _poly_add(a, b):
    n = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else _F(0)) + (b[i] if i < len(b) else _F(0))
        for i in range(n)
    )


def _poly_scale(a, s):
    return tuple(c * s for c in a)


def _poly_antiderivative(a):
    return (_F(0),) + tuple(c / (i + 1) for i, c in enumerate(a))


def _poly_derivative(a):
    return tuple(c * i for i, c in enumerate(a))[1:] or (_F(0),)


def _poly_shift(a, s: Fraction):
    """Coefficients of p(t + s)."""
    out = [_F(0)] * len(a)
    for i, c in enumerate(a):
        # c * (t+s)^i
        for j in range(i + 1):
            out[j] += c * math.comb(i, j) * s ** (i - j)
    return tuple(out)


@dataclass(frozen=True)
class PiecewisePoly:
    """Continuous piecewise polynomial on [breaks[0], breaks[-1]]."""

    breaks: tuple[Fraction, ...]
    pieces: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        assert len(self.pieces) == len(self.breaks) - 1
        for b0, b1 in itertools.pairwise(self.breaks):
            assert b0 < b1
        for i in range(1, len(self.pieces)):
            b = self.breaks[i]
            assert _poly_eval(self.pieces[i - 1], b) == _poly_eval(self.pieces[i], b), (
                "discontinuity at breakpoint"
            )

    @property
    def domain(self):
        return self.breaks[0], self.breaks[-1]

    def piece_index(self, t: Fraction) -> int:
        lo, hi = self.domain
        if not lo <= t <= hi:
            raise DomainError(f"{t} outside [{lo}, {hi}]")
        for i in range(len(self.pieces)):
            if t <= self.breaks[i + 1]:
                return i
        return len(self.pieces) - 1

    def __call__(self, t) -> Fraction:
        t = _F(t)
        return _poly_eval(self.pieces[self.piece_index(t)], t)

    def eval_ball(self, t: RealBall) -> RealBall:
        lo, hi = self.domain
        tlo, thi = max(t.lo, lo), min(t.hi, hi)
        if tlo > thi:
            raise DomainError("ball outside the domain")
        i0, i1 = self.piece_index(tlo), self.piece_index(thi)
        out = None
        for i in range(i0, i1 + 1):
            seg = RealBall(max(tlo, self.breaks[i]), min(thi, self.breaks[i + 1]))
            v = _poly_eval_ball(self.pieces[i], seg)
            out = v if out is None else out.hull(v)
        return out

    def antiderivative(self) -> "PiecewisePoly":
        pieces = []
        acc = _F(0)
        for i, p in enumerate(self.pieces):
            ad = _poly_antiderivative(p)
            shiftv = acc - _poly_eval(ad, self.breaks[i])
            pieces.append(_poly_add(ad, (shiftv,)))
            acc = _poly_eval(pieces[-1], self.breaks[i + 1])
        return PiecewisePoly(self.breaks, tuple(pieces))

    def derivative_pieces(self):
        return tuple(_poly_derivative(p) for p in self.pieces)


def _integral_over_window(pw: PiecewisePoly, flat_after: Fraction):
    """Antiderivative G of pw extended by 0 above flat_after (G constant there)."""
    G = pw.antiderivative()
    top = G(flat_after)
    # extend with a constant piece so window integrals work up to +1 beyond
    breaks = G.breaks + (G.breaks[-1] + 2,)
    pieces = G.pieces + ((top,),)
    return PiecewisePoly(breaks, pieces)


# ---------------------------------------------------------------------------
# vol and mu as cached piecewise polynomials
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def vol_piecewise(n: int) -> PiecewisePoly:
    """vol of the sublevel set {sum zeta_i < t} inside [0,1]^n, on [0, n]."""
    if n < 1:
        raise DomainError("n >= 1 required")
    breaks = tuple(_F(k) for k in range(n + 1))
    pieces = []
    fact = math.factorial(n)
    for k in range(n):
        acc = (_F(0),)
        for j in range(k + 1):
            # (t - j)^n expanded in powers of t
            term = tuple(
                _F(math.comb(n, i)) * _F((-j)) ** (n - i) for i in range(n + 1)
            )
            acc = _poly_add(acc, _poly_scale(term, _F((-1) ** j, fact) * math.comb(n, j)))
        pieces.append(acc)
    return PiecewisePoly(breaks, tuple(pieces))


@lru_cache(maxsize=None)
def mu_piecewise(n: int) -> PiecewisePoly:
    """mu_n on [0, n], built by the window-integral recursion from n = 1."""
    if n < 1:
        raise DomainError("n >= 1 required")
    if n == 1:
        return PiecewisePoly((_F(0), _F(1)), ((_F(0), _F(1), _F(-1)),))
    prev = mu_piecewise(n - 1)
    G = _integral_over_window(prev, _F(n - 1))
    breaks = tuple(_F(k) for k in range(n + 1))
    pieces = []
    for k in range(n):
        # mu_n(t) = G(min(t, n-1+eps)) - G(max(t-1, 0)) on [k, k+1]
        upper = G.pieces[G.piece_index(_F(2 * k + 1, 2))] if k <= n - 2 else (G(_F(n - 1)),)
        if k == 0:
            lower = (_F(0),)
        else:
            idx = G.piece_index(_F(2 * k - 1, 2))
            lower = _poly_shift(G.pieces[idx], _F(-1))
        pieces.append(_poly_add(upper, _poly_scale(lower, _F(-1))))
    return PiecewisePoly(breaks, tuple(pieces))


def vol_lower(n: int, t) -> Fraction:
    """Exact volume of the lower set at level t, 0 <= t <= n."""
    return vol_piecewise(n)(_F(t))


def vol_upper(n: int, t) -> Fraction:
    return 1 - vol_lower(n, t)


def mu(n: int, t) -> Fraction:
    return mu_piecewise(n)(_F(t))


def vol_lower_ball(n: int, t: RealBall) -> RealBall:
    return vol_piecewise(n).eval_ball(t)


def mu_ball(n: int, t: RealBall) -> RealBall:
    return mu_piecewise(n).eval_ball(t)


def int_zeta1_lower(n: int, t) -> Fraction:
    """Exact integral of zeta_1 over the lower set at level t."""
    return (vol_lower(n, t) - mu(n, t)) / 2


def int_zeta1_upper(n: int, t) -> Fraction:
    """Exact integral of zeta_1 over the upper set at level t."""
    return (1 - vol_lower(n, t) + mu(n, t)) / 2


def int_zeta1_upper_ball(n: int, t: RealBall) -> RealBall:
    v = vol_lower_ball(n, t)
    m = mu_ball(n, t)
    return (RealBall.exact(1) - v + m) * _F(1, 2)


# ---------------------------------------------------------------------------
# monotone inversion
# ---------------------------------------------------------------------------


def _solve_piece_exact(coeffs, target: Fraction, lo: Fraction, hi: Fraction):
    """Rational root of poly = target in [lo, hi] for degree <= 2, else None."""
    c = list(coeffs)
    c[0] -= target
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    if len(c) == 1:
        return None
    if len(c) == 2:
        root = -c[0] / c[1]
        return root if lo <= root <= hi else None
    if len(c) == 3:
        a2, a1, a0 = c[2], c[1], c[0]
        disc = a1 * a1 - 4 * a2 * a0
        if disc < 0:
            return None
        s = _exact_sqrt(disc)
        if s is None:
            return None
        for root in ((-a1 + s) / (2 * a2), (-a1 - s) / (2 * a2)):
            if lo <= root <= hi:
                return root
    return None


def invert_monotone(
    pw: PiecewisePoly,
    target,
    lo: Fraction,
    hi: Fraction,
    increasing: bool,
    precision: int = 128,
):
    """Solve pw(t) = target on [lo, hi] where pw is monotone there.

    ``target`` may be exact (Fraction) or a RealBall.  Returns an exact
    Fraction when the bracketing piece is linear/quadratic with a rational
    root and the target is exact, otherwise a rigorous RealBall enclosure.
    """
    if isinstance(target, RealBall) and target.is_exact():
        target = target.lo
    exact_target = not isinstance(target, RealBall)
    tlo = _F(target) if exact_target else target.lo
    thi = _F(target) if exact_target else target.hi
    flo, fhi = pw(lo), pw(hi)
    if not increasing:
        flo, fhi = fhi, flo
    if not (flo <= tlo and thi <= fhi):
        raise DomainError("target outside the range of the piecewise polynomial")

    if exact_target:
        if pw(lo) == target:
            return lo
        if pw(hi) == target:
            return hi
        # locate the bracketing piece
        for i in range(len(pw.pieces)):
            a, b = max(lo, pw.breaks[i]), min(hi, pw.breaks[i + 1])
            if a >= b:
                continue
            va, vb = pw(a), pw(b)
            lo_v, hi_v = (va, vb) if increasing else (vb, va)
            if lo_v <= target <= hi_v:
                root = _solve_piece_exact(pw.pieces[i], target, a, b)
                if root is not None:
                    return root
                return _bisect(pw, target, target, a, b, increasing, precision)
        raise DomainError("no bracketing piece found")
    return _bisect(pw, tlo, thi, lo, hi, increasing, precision)


def _bisect(pw, tlo, thi, a, b, increasing, precision):
    # Maintain [a, b] with pw(a) on the low side of tlo and pw(b) on the
    # high side of thi (swapped sense when decreasing).
    tol = _F(1, 2**precision)
    for _ in range(precision + (b - a).numerator.bit_length() + 8):
        if b - a <= tol:
            break
        mid = (a + b) / 2
        v = pw(mid)
        if tlo == thi and v == tlo:
            return RealBall.exact(mid)  # exact hit on a strictly monotone stretch
        if increasing:
            if v < tlo:
                a = mid
            elif v > thi:
                b = mid
            else:
                # mid is inside the target band: shrink both sides separately
                a2 = _bisect(pw, tlo, tlo, a, mid, increasing, precision)
                b2 = _bisect(pw, thi, thi, mid, b, increasing, precision)
                lo = a2.lo if isinstance(a2, RealBall) else a2
                hi = b2.hi if isinstance(b2, RealBall) else b2
                return RealBall(lo, hi)
        else:
            if v > thi:
                a = mid
            elif v < tlo:
                b = mid
            else:
                a2 = _bisect(pw, thi, thi, a, mid, increasing, precision)
                b2 = _bisect(pw, tlo, tlo, mid, b, increasing, precision)
                lo = a2.lo if isinstance(a2, RealBall) else a2
                hi = b2.hi if isinstance(b2, RealBall) else b2
                return RealBall(lo, hi)
    return RealBall(a, b)


# ---------------------------------------------------------------------------
# named threshold functions
# ---------------------------------------------------------------------------


def t_qn(q: int, n: int, delta, precision: int = 128):
    """The level t with 1 - q*vol_lower(n, t) = delta, in [0, n]."""
    if q < 1 or n < 1:
        raise DomainError("q, n >= 1 required")
    delta = _F(delta)
    if not 0 <= delta <= 1:
        raise DomainError("delta in [0, 1] required")
    target = (1 - delta) / q
    return invert_monotone(vol_piecewise(n), target, _F(0), _F(n), True, precision)


def big_r(q: int, n: int, delta, precision: int = 128):
    """Positive solution R of (1 + (q-1)/R)^(n-1) - 1 = delta * delta^(1/n).

    Exact rearrangement: R = (q-1) / ((1 + delta^((n+1)/n))^(1/(n-1)) - 1).
    """
    if q < 2:
        raise DomainError("q >= 2 required (q = 1 degenerates the equation)")
    if n < 2:
        raise DomainError("n >= 2 required")
    delta = _F(delta)
    if not 0 < delta <= 1:
        raise DomainError("delta in (0, 1] required")
    droot = RealBall.exact(delta).nth_root(n, precision)
    inner = RealBall.exact(1) + droot * delta
    base = inner.nth_root(n - 1, precision)
    denom = base - 1
    out = RealBall.exact(q - 1) / denom
    if droot.is_exact() and base.is_exact():
        return out.lo
    return out


def eps_qr(q: int, r: Sequence[int]) -> Fraction:
    """prod_{i<n} (1 + max_{j>i}(r_j / r_i) * (q-1)) - 1, evaluated literally."""
    n = len(r)
    acc = _F(1)
    for i in range(n - 1):
        ratio = max(_F(r[j], r[i]) for j in range(i + 1, n))
        acc *= 1 + ratio * max(q - 1, 0)
    return acc - 1


def eps_2d(q: int, r: Sequence[int]) -> Fraction:
    """(q-1) * min(r) / max(r): the two-factor variant used by the n = 2
    semi-stability checker (agrees with eps_qr when r is sorted decreasingly)."""
    if len(r) != 2:
        raise DomainError("two factors required")
    return _F(max(q - 1, 0)) * min(r) / max(r)


def u_qr(q: int, r: Sequence[int], t, precision: int = 128, vol_t=None):
    """Level u with vol_lower(n, u) = clamp(1 + eps_qr - q*vol_lower(n, t))."""
    n = len(r)
    eps = eps_qr(q, r)
    if vol_t is None:
        vol_t = (
            vol_lower_ball(n, t) if isinstance(t, RealBall) else vol_lower(n, _F(t))
        )
    target = 1 + eps - q * vol_t
    if isinstance(target, RealBall):
        if target.hi <= 0:
            return _F(0)
        if target.lo >= 1:
            return _F(n)
        target = RealBall(max(target.lo, _F(0)), min(target.hi, _F(1)))
    else:
        target = min(max(target, _F(0)), _F(1))
        if target == 0:
            return _F(0)
        if target == 1:
            return _F(n)
    return invert_monotone(vol_piecewise(n), target, _F(0), _F(n), True, precision)


def w_qr(q: int, r: Sequence[int], delta, precision: int = 128):
    """The unique w in [n/2, n) with mu_n(w) = mu_n(u_tilde) - eps_qr.

    u_tilde = u_qr evaluated at t_qn(delta); requires mu_n(u_tilde) > eps
    (raises HypothesisFailed otherwise).
    """
    n = len(r)
    delta = _F(delta)
    eps = eps_qr(q, r)
    # vol at t_a is exactly (1 - delta)/q by construction
    vol_ta = (1 - delta) / q
    ut = u_qr(q, r, None, precision, vol_t=vol_ta)
    mu_ut = (
        mu_ball(n, ut) if isinstance(ut, RealBall) else RealBall.exact(mu(n, ut))
    )
    gap = mu_ut - eps
    if gap.sign() is None:
        raise HypothesisFailed("mu_n(u_tilde) - eps too close to 0 at this precision")
    if gap.sign() <= 0:
        raise HypothesisFailed(
            "mu_n(u_tilde) <= eps_qr", {"mu_u": mu_ut, "eps": eps}
        )
    target = mu_ut - eps
    if target.is_exact():
        target = target.lo
    return invert_monotone(
        mu_piecewise(n), target, _F(n, 2), _F(n), increasing=False, precision=precision
    )


# ---------------------------------------------------------------------------
# lattice sets
# ---------------------------------------------------------------------------


def _check_box(r: Sequence[int], limit: int | None):
    size = math.prod(ri + 1 for ri in r)
    if size > (limit or LATTICE_SIZE_LIMIT):
        raise SizeLimit(f"box has {size} lattice points")
    return size


def box_points(r: Sequence[int]) -> Iterable[tuple[int, ...]]:
    return itertools.product(*(range(ri + 1) for ri in r))


def lattice_points(
    r: Sequence[int], t, side: str, limit: int | None = None
) -> list[tuple[int, ...]]:
    """Points of the box with sum l_i / r_i < t ('lower') or >= t ('upper')."""
    if side not in ("lower", "upper"):
        raise ValueError("side must be 'lower' or 'upper'")
    t = _F(t)
    if t < 0:
        raise DomainError("t >= 0 required")
    _check_box(r, limit)
    out = []
    for pt in box_points(r):
        s = sum(_F(li, ri) for li, ri in zip(pt, r))
        if (s < t) if side == "lower" else (s >= t):
            out.append(pt)
    return out


def count_lower(r: Sequence[int], t, limit: int | None = None) -> int:
    return len(lattice_points(r, t, "lower", limit))


def count_upper(r: Sequence[int], t, limit: int | None = None) -> int:
    return len(lattice_points(r, t, "upper", limit))


def mu_z(r: Sequence[int], i: int, t, limit: int | None = None) -> int:
    """sum over the upper lattice set of (2 l_i - r_i); 1-based factor index."""
    if not 1 <= i <= len(r):
        raise DomainError("factor index out of range")
    return sum(2 * pt[i - 1] - r[i - 1] for pt in lattice_points(r, t, "upper", limit))


def upper_coordinate_sum(r: Sequence[int], t, i: int, limit: int | None = None) -> int:
    """sum over the upper lattice set of l_i; 1-based factor index."""
    if not 1 <= i <= len(r):
        raise DomainError("factor index out of range")
    return sum(pt[i - 1] for pt in lattice_points(r, t, "upper", limit))
