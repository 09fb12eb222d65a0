"""Exact linear algebra over Q and Z: canonical echelon bases, ranks,
nullspaces, row-space lattice operations, determinantal divisors.

Matrices are tuples/lists of rows; entries are Fractions (or ints where
noted).  All routines are exact; nothing here touches floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

_F = Fraction


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[tuple[tuple[Fraction, ...], ...], tuple[int, ...]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(map(_F, r)) for r in rows]
    if not m:
        return (), ()
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> tuple[tuple[Fraction, ...], ...]:
    """Canonical basis of the right kernel {v : A v = 0}, as RREF rows."""
    rows = [list(r) for r in rows]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for empty matrix")
        ncols = len(rows[0])
    red, pivots = rref(rows) if rows else ((), ())
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fc in free:
        v = [_F(0)] * ncols
        v[fc] = _F(1)
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(tuple(v))
    return rref(basis)[0] if basis else ()


def row_space_sum(a, b, ncols: int) -> tuple[tuple[Fraction, ...], ...]:
    return rref(list(a) + list(b))[0] if (a or b) else ()


def row_space_intersection(a, b, ncols: int) -> tuple[tuple[Fraction, ...], ...]:
    """Canonical basis of rowspace(a) ∩ rowspace(b)."""
    if not a or not b:
        return ()
    # alpha·A = beta·B  <=>  (alpha, beta) in kernel of [A^T | -B^T]
    ka, kb = len(a), len(b)
    stacked = [
        [a[i][c] for i in range(ka)] + [-b[j][c] for j in range(kb)]
        for c in range(ncols)
    ]
    ker = nullspace(stacked, ka + kb)
    vecs = []
    for v in ker:
        w = [sum((v[i] * a[i][c] for i in range(ka)), _F(0)) for c in range(ncols)]
        if any(x != 0 for x in w):
            vecs.append(tuple(w))
    return rref(vecs)[0] if vecs else ()


def scale_rows_to_int(rows) -> list[list[int]]:
    """Per-row scaling to primitive integer vectors (content 1, first nonzero > 0)."""
    out = []
    for r in rows:
        den = math.lcm(*(x.denominator for x in map(_F, r))) if r else 1
        ints = [int(_F(x) * den) for x in r]
        g = math.gcd(*ints) if any(ints) else 1
        if g:
            ints = [x // g for x in ints]
        lead = next((x for x in ints if x != 0), 1)
        if lead < 0:
            ints = [-x for x in ints]
        out.append(ints)
    return out


def det_fraction(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant (fraction-free Bareiss on a common-denominator lift)."""
    n = len(rows)
    if n == 0:
        return _F(1)
    den = 1
    for r in rows:
        for x in r:
            den = math.lcm(den, _F(x).denominator)
    m = [[int(_F(x) * den) for x in r] for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pr = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pr is None:
                return _F(0)
            m[k], m[pr] = m[pr], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return _F(sign * m[n - 1][n - 1], den**n)


def gram_det(rows: Sequence[Sequence[Fraction]], diag: Sequence[Fraction]) -> Fraction:
    """det(A · diag · A^T) for exact rows; diag are the monomial square-norms."""
    k = len(rows)
    g = [
        [sum((rows[i][c] * rows[j][c] * diag[c] for c in range(len(diag))), _F(0)) for j in range(k)]
        for i in range(k)
    ]
    return det_fraction(g)


def determinantal_divisor(int_rows: Sequence[Sequence[int]]) -> int:
    """gcd of all k x k minors of a full-row-rank k x n integer matrix.

    Computed via Smith reduction (the product of the elementary divisors).
    """
    m = [list(r) for r in int_rows]
    k = len(m)
    if k == 0:
        return 1
    n = len(m[0])
    d = 1
    top = 0
    left = 0
    while top < k and left < n:
        # find smallest nonzero |entry| in the remaining block
        best = None
        for i in range(top, k):
            for j in range(left, n):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            raise ValueError("matrix rows are not independent")
        bi, bj = best
        m[top], m[bi] = m[bi], m[top]
        for row in m:
            row[left], row[bj] = row[bj], row[left]
        piv = m[top][left]
        dirty = False
        for i in range(top + 1, k):
            q = m[i][left] // piv
            if q:
                for j in range(left, n):
                    m[i][j] -= q * m[top][j]
            if m[i][left]:
                dirty = True
        for j in range(left + 1, n):
            q = m[top][j] // piv
            if q:
                for i in range(top, k):
                    m[i][j] -= q * m[i][left]
            if m[top][j]:
                dirty = True
        if dirty:
            continue  # re-pivot on a smaller entry
        d *= abs(piv)
        top += 1
        left += 1
    if top < k:
        raise ValueError("matrix rows are not independent")
    return d


def graded_rank_jumps(int_rows: Sequence[Sequence[int]], col_weights: Sequence[int]) -> dict[int, int]:
    """Rank increments by ascending column-weight class.

    Returns {w: rank(cols weight <= w) - rank(cols weight < w)}.  Used for
    weight filtrations: processing columns in ascending weight order, the
    rank jump at weight w is the dimension of the w-graded piece.
    """
    k = len(int_rows)
    if k == 0:
        return {}
    order = sorted(range(len(col_weights)), key=lambda c: col_weights[c])
    m = [list(r) for r in int_rows]
    used = [False] * k
    jumps: dict[int, int] = {}
    # Invariant: free (unused) rows hold 0 in every pivot column created so
    # far, so the rank of the processed-column submatrix equals #pivots.
    for c in order:
        pr = next((i for i in range(k) if not used[i] and m[i][c] != 0), None)
        if pr is None:
            continue
        used[pr] = True
        piv = m[pr][c]
        for i in range(k):
            if not used[i] and m[i][c] != 0:
                f = m[i][c]
                row = [a * piv - f * b for a, b in zip(m[i], m[pr])]
                g = math.gcd(*row) if any(row) else 1
                m[i] = [x // g for x in row] if g > 1 else row
        w = col_weights[c]
        jumps[w] = jumps.get(w, 0) + 1
    return jumps
