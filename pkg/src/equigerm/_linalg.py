"""Small dense exact linear algebra over Q used by the localization step.

Matrices are lists of row lists of Fractions.  Sizes here are quotient-algebra
dimensions (tens, occasionally a couple hundred), so Gauss-Jordan is plenty,
but the elimination runs on integer-scaled rows: Fraction arithmetic spends
most of its time normalizing, while integer rows need one content division
per elimination and one exact division at the end.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

try:  # big-integer fast path; results are identical stdlib ints/Fractions
    from gmpy2 import gcd as _gcd
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is an optional accelerant
    from math import gcd as _gcd

    _mpz = int

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _int_row(row) -> list:
    scale = lcm(*(f.denominator for f in row)) if row else 1
    return [_mpz(f.numerator * (scale // f.denominator)) for f in row]


def _normalize_row(row) -> None:
    g = _mpz(0)
    for x in row:
        g = _gcd(g, x)
        if g == 1:
            return
    if g > 1:
        for i, x in enumerate(row):
            row[i] = x // g


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot column indices."""
    mat = [_int_row(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        prow = mat[r]
        pval = prow[c]
        for i in range(len(mat)):
            if i == r:
                continue
            row = mat[i]
            f = row[c]
            if f:
                mat[i] = [a * pval - f * b for a, b in zip(row, prow)]
                _normalize_row(mat[i])
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    out = []
    for i, c in enumerate(pivots):
        pval = mat[i][c]
        out.append([Fraction(int(x), int(pval)) for x in mat[i]])
    return out, pivots


def kernel_basis(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel of the matrix."""
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [_ZERO] * ncols
        v[free] = _ONE
        for i, p in enumerate(pivots):
            v[p] = -red[i][free]
        basis.append(v)
    return basis


def residual_map(vectors: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    """Rows Q with ker(Q) = span(vectors): the residual of reduction by the
    span, read off on the non-pivot coordinates."""
    red, pivots = rref(vectors)
    pivot_set = set(pivots)
    out = []
    for j in range(n):
        if j in pivot_set:
            continue
        row = [_ZERO] * n
        row[j] = _ONE
        for i, p in enumerate(pivots):
            row[p] = -red[i][j]
        out.append(row)
    return out


def mat_vec(rows: list[list[Fraction]], v: list[Fraction]) -> list[Fraction]:
    return [sum((a * b for a, b in zip(row, v)), _ZERO) for row in rows]


def mat_mul(a: list[list[Fraction]], b: list[list[Fraction]]) -> list[list[Fraction]]:
    if not a or not b:
        return []
    nb = len(b)
    ncols = len(b[0])
    a_int = [_int_row(row) for row in a]
    a_den = [
        lcm(*(f.denominator for f in row)) if row else 1 for row in a
    ]
    bt_int = []
    bt_den = []
    for j in range(ncols):
        col = [b[i][j] for i in range(nb)]
        bt_int.append(_int_row(col))
        bt_den.append(lcm(*(f.denominator for f in col)) if col else 1)
    out = []
    for row, rd in zip(a_int, a_den):
        out_row = []
        for col, cd in zip(bt_int, bt_den):
            s = sum(x * y for x, y in zip(row, col))
            out_row.append(Fraction(int(s), rd * cd))
        out.append(out_row)
    return out
