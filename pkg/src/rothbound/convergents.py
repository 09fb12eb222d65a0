"""Exact continued-fraction convergents of real quadratic irrationals,
used to generate approximation instances.

The expansion runs on the exact (P + sqrt(D))/Q representation, so the
partial quotients are computed with integer arithmetic only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotRealQuadratic
from .heights import ProjPoint

_F = Fraction


@dataclass(frozen=True)
class ConvergentCorpus:
    minimal_polynomial: tuple[int, int, int]
    convergents: tuple[tuple[int, int], ...]  # (p_i, q_i)
    partial_quotients: tuple[int, ...]

    def points(self) -> list[ProjPoint]:
        """(q_i : p_i) so that the affine coordinate is the convergent p/q."""
        return [ProjPoint.rational(qi, pi) for pi, qi in self.convergents]


def _isqrt_floor(n: int) -> int:
    return math.isqrt(n)


def generate_convergents(minpoly, count: int) -> ConvergentCorpus:
    """First ``count`` convergents of the positive irrational root.

    ``minpoly`` is (c0, c1, 1): x^2 + c1 x + c0 with integer coefficients;
    the discriminant must be positive and not a perfect square, and the
    chosen root (-c1 + sqrt(D))/2 must be positive.
    """
    minpoly = tuple(int(c) for c in minpoly)
    if len(minpoly) != 3 or minpoly[2] != 1:
        raise NotRealQuadratic("monic degree-2 polynomial required")
    c0, c1, _ = minpoly
    D = c1 * c1 - 4 * c0
    if D <= 0:
        raise NotRealQuadratic("no real roots")
    s = _isqrt_floor(D)
    if s * s == D:
        raise NotRealQuadratic("rational roots")
    # alpha = (P + sqrt(D)) / Q with the invariant Q | (D - P^2)
    P, Q = -c1, 2
    if P + s < 0:  # the + root is negative
        raise NotRealQuadratic("the larger root is not positive")
    quotients = []
    convergents = []
    p_prev, p_cur = 0, 1
    q_prev, q_cur = 1, 0
    for _ in range(count):
        # Q > 0 is an invariant here: Q' Q = (sqrt(D)-P')(sqrt(D)+P') with
        # 0 < sqrt(D) - P' < Q and Q < 2 sqrt(D) at every step.
        assert Q > 0
        a = (P + s) // Q
        quotients.append(a)
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        convergents.append((p_cur, q_cur))
        P = a * Q - P
        Q = (D - P * P) // Q
    for (p1, q1), (p2, q2) in zip(convergents, convergents[1:]):
        assert abs(p1 * q2 - p2 * q1) == 1, "convergent recurrence broke"
    return ConvergentCorpus(minpoly, tuple(convergents), tuple(quotients))
