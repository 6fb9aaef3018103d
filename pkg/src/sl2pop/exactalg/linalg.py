"""Exact linear systems.

Rational systems are reduced with flint's ``fmpq_mat.rref`` by default, or
with fraction-free (Bareiss) elimination on an integer-scaled copy; systems over a quotient ring use ordinary Gauss-Jordan
where an inversion may raise ``SplitRequired``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import flint

from .poly import as_fraction
from .quotient import QuotientRingElement

__all__ = ["NoSolution", "LinearSolution", "linear_solve", "nullspace", "bareiss_det"]


class NoSolution(ValueError):
    """The linear system is inconsistent."""


@dataclass(frozen=True)
class LinearSolution:
    particular: tuple
    nullspace: tuple  # basis vectors

    @property
    def dimension(self) -> int:
        return len(self.nullspace)


def _integer_rows(matrix, rhs):
    rows = []
    for row, b in zip(matrix, rhs):
        fr = [as_fraction(c) for c in row] + [as_fraction(b)]
        den = 1
        for c in fr:
            den = lcm(den, c.denominator)
        rows.append([int(c * den) for c in fr])
    return rows


def _bareiss_echelon(rows, ncols):
    """In-place fraction-free row echelon form; returns pivot columns."""
    m = len(rows)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, m):
            a = rows[i][c]
            ri = rows[i]
            rr = rows[r]
            for k in range(c, len(ri)):
                ri[k] = (piv * ri[k] - a * rr[k]) // prev
        pivots.append(c)
        prev = piv
        r += 1
    return pivots


def _back_substitute(rows, pivots, ncols, free_values, homogeneous):
    x = [Fraction(0)] * ncols
    for c, v in free_values.items():
        x[c] = Fraction(v)
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        row = rows[r]
        acc = Fraction(0) if homogeneous else Fraction(row[ncols])
        for k in range(c + 1, ncols):
            if row[k]:
                acc -= row[k] * x[k]
        x[c] = acc / row[c]
    return x


def _solve_rational(matrix, rhs, ncols):
    rows = _integer_rows(matrix, rhs)
    pivots = _bareiss_echelon(rows, ncols)
    rank = len(pivots)
    for row in rows[rank:]:
        if row[ncols] != 0:
            raise NoSolution("inconsistent linear system")
    free = [c for c in range(ncols) if c not in set(pivots)]
    part = _back_substitute(rows, pivots, ncols, {}, homogeneous=False)
    basis = []
    for f in free:
        basis.append(tuple(_back_substitute(rows, pivots, ncols, {f: 1}, homogeneous=True)))
    return LinearSolution(tuple(part), tuple(basis))


def _solve_field(matrix, rhs, ncols, one, zero):
    rows = [list(row) + [b] for row, b in zip(matrix, rhs)]
    m = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        p = None
        for i in range(r, m):
            v = rows[i][c]
            if not (v == 0):
                if isinstance(v, QuotientRingElement):
                    v.inverse()  # a zero divisor raises SplitRequired here
                p = i
                break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = one / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(m):
            if i != r and not (rows[i][c] == 0):
                a = rows[i][c]
                rows[i] = [vi - a * vr for vi, vr in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for row in rows[len(pivots):]:
        v = row[ncols]
        if not (v == 0):
            if isinstance(v, QuotientRingElement):
                v.inverse()
            raise NoSolution("inconsistent linear system")
    free = [c for c in range(ncols) if c not in set(pivots)]
    part = [zero] * ncols
    for i, c in enumerate(pivots):
        part[c] = rows[i][ncols]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for i, c in enumerate(pivots):
            v[c] = zero - rows[i][f]
        basis.append(tuple(v))
    return LinearSolution(tuple(part), tuple(basis))


def _fmpq(v):
    v = as_fraction(v)
    return flint.fmpq(v.numerator, v.denominator)


def _solve_flint(matrix, rhs, ncols):
    aug = flint.fmpq_mat(len(matrix), ncols + 1,
                         [_fmpq(v) for row, b in zip(matrix, rhs) for v in list(row) + [b]])
    red, rank = aug.rref()
    pivots = []
    for r in range(rank):
        c = next(c for c in range(ncols + 1) if red[r, c] != 0)
        if c == ncols:
            raise NoSolution("inconsistent linear system")
        pivots.append(c)

    def frac(v):
        return Fraction(int(v.p), int(v.q))

    free = [c for c in range(ncols) if c not in set(pivots)]
    part = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        part[c] = frac(red[r, ncols])
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -frac(red[r, f])
        basis.append(tuple(v))
    return LinearSolution(tuple(part), tuple(basis))


def linear_solve(matrix, rhs=None, method: str = "auto") -> LinearSolution:
    """Solve ``matrix @ x = rhs``.

    Returns a particular solution and a null-space basis; raises
    ``NoSolution`` if inconsistent.  ``method`` is ``"flint"`` or ``"bareiss"`` (rational
    entries only), ``"gauss"`` or ``"auto"``.
    """
    matrix = [list(row) for row in matrix]
    if not matrix:
        raise ValueError("empty system")
    ncols = len(matrix[0])
    if any(len(row) != ncols for row in matrix):
        raise ValueError("ragged matrix")
    if rhs is None:
        rhs = [0] * len(matrix)
    if len(rhs) != len(matrix):
        raise ValueError("right-hand side has the wrong length")
    qre = next((v for row in matrix for v in row if isinstance(v, QuotientRingElement)), None)
    if qre is None:
        qre = next((v for v in rhs if isinstance(v, QuotientRingElement)), None)
    if qre is not None:
        if method in ("bareiss", "flint"):
            raise ValueError("Bareiss path needs rational entries")
        lift = qre.lift
        matrix = [[v if isinstance(v, QuotientRingElement) else lift(v) for v in row] for row in matrix]
        rhs = [v if isinstance(v, QuotientRingElement) else lift(v) for v in rhs]
        return _solve_field(matrix, rhs, ncols, lift(1), lift(0))
    if method == "gauss":
        matrix = [[as_fraction(v) for v in row] for row in matrix]
        rhs = [as_fraction(v) for v in rhs]
        return _solve_field(matrix, rhs, ncols, Fraction(1), Fraction(0))
    if method == "bareiss":
        return _solve_rational(matrix, rhs, ncols)
    return _solve_flint(matrix, rhs, ncols)


def nullspace(matrix, method: str = "auto") -> tuple:
    return linear_solve(matrix, None, method=method).nullspace


def bareiss_det(matrix, exact_div=None):
    """Fraction-free determinant over an integral domain.

    ``exact_div(a, b)`` must return ``a/b`` when the division is exact; the
    default uses ``//`` for integers and ``exact_div`` methods otherwise.
    """
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    if exact_div is None:
        def exact_div(u, v):
            if isinstance(u, int) and isinstance(v, int):
                return u // v
            if hasattr(u, "exact_div"):
                return u.exact_div(v)
            return u / v
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if not (a[i][k] == 0)), None)
            if swap is None:
                return a[k][k] * 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num if (k == 0 and isinstance(prev, int) and prev == 1) else exact_div(num, prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det
