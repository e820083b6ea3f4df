"""Exact integer linear algebra (fraction-free elimination).

Everything here works on Python ints so determinants never round; the
unimodularity tests downstream depend on that.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

Matrix = Sequence[Sequence[int]]


def _copy(rows: Matrix) -> list[list[int]]:
    return [[int(x) for x in r] for r in rows]


def bareiss_det(rows: Matrix) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    a = _copy(rows)
    n = len(a)
    if n == 0:
        return 1
    if any(len(r) != n for r in a):
        raise ValueError("bareiss_det needs a square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def echelon(rows: Matrix) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; returns (echelon rows, pivot columns)."""
    a = _copy(rows)
    if not a:
        return a, []
    ncols = len(a[0])
    pivots: list[int] = []
    r, prev = 0, 1
    for c in range(ncols):
        if r == len(a):
            break
        swap = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if swap is None:
            continue
        a[r], a[swap] = a[swap], a[r]
        pivot = a[r][c]
        for i in range(r + 1, len(a)):
            for j in range(c + 1, ncols):
                a[i][j] = (a[i][j] * pivot - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = pivot
        pivots.append(c)
        r += 1
    return a, pivots


def rank(rows: Matrix) -> int:
    return len(echelon(rows)[1])


def first_dependent_row(rows: Matrix) -> int | None:
    """Index of the first row lying in the span of the rows before it."""
    for i in range(len(rows)):
        if rank(rows[: i + 1]) <= i:
            return i
    return None


def submatrix(rows: Matrix, cols: Sequence[int]) -> list[list[int]]:
    return [[int(r[c]) for c in cols] for r in rows]


def first_nonsingular_minor(rows: Matrix) -> tuple[tuple[int, ...], int] | None:
    """First (in lexicographic column order) maximal minor with nonzero determinant."""
    k = len(rows)
    if k == 0:
        return (), 1
    for cols in combinations(range(len(rows[0])), k):
        d = bareiss_det(submatrix(rows, cols))
        if d != 0:
            return cols, d
    return None


def maximal_minors(rows: Matrix) -> list[int]:
    """Determinants of every k x k column submatrix of a k x m matrix."""
    k = len(rows)
    if k == 0:
        return [1]
    return [bareiss_det(submatrix(rows, cols)) for cols in combinations(range(len(rows[0])), k)]


def matvec(rows: Matrix, v: Sequence[int]) -> list[int]:
    return [sum(int(x) * int(y) for x, y in zip(r, v)) for r in rows]
