"""Exact integer linear algebra: Bareiss determinant and signed Pfaffian.

No floating point anywhere.  Matrices are plain lists of lists of Python
ints, which keeps the evaluators cheap to build and pickle.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence[int]]


class MatrixError(ValueError):
    pass


def _square(a: Matrix) -> int:
    n = len(a)
    if any(len(row) != n for row in a):
        raise MatrixError("matrix is not square")
    return n


def bareiss_det(a: Matrix) -> int:
    """Determinant by fraction-free Gaussian elimination.

    Every intermediate entry is an integer (Sylvester's identity makes the
    division exact).  The empty matrix has determinant 1.
    """
    n = _square(a)
    m = [list(map(int, row)) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            lead = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - lead * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    if n == 0:
        return 1
    return sign * m[n - 1][n - 1]


def check_skew(a: Matrix) -> int:
    n = _square(a)
    if n % 2:
        raise MatrixError(f"Pfaffian needs even dimension, got {n}")
    for i in range(n):
        for j in range(i, n):
            if a[i][j] != -a[j][i]:
                raise MatrixError(f"not skew-symmetric at ({i}, {j})")
    return n


def signed_pfaffian(a: Matrix) -> int:
    """Pfaffian of an even-dimensional skew-symmetric integer matrix.

    Skew elimination over exact rationals: pivot on the 2x2 block in rows and
    columns ``k, k+1`` and replace the trailing block by its Schur complement,
    which is again skew-symmetric.  Swapping index ``k+1`` with another index
    (rows and columns together) flips the sign.
    """
    n = check_skew(a)
    m = [[Fraction(x) for x in row] for row in a]
    result = Fraction(1)
    for k in range(0, n - 1, 2):
        piv_col = next((j for j in range(k + 1, n) if m[k][j] != 0), None)
        if piv_col is None:
            return 0
        if piv_col != k + 1:
            s = k + 1
            m[s], m[piv_col] = m[piv_col], m[s]
            for row in m:
                row[s], row[piv_col] = row[piv_col], row[s]
            result = -result
        piv = m[k][k + 1]
        result *= piv
        rk, rk1 = m[k], m[k + 1]
        for i in range(k + 2, n):
            ri = m[i]
            u, w = ri[k], ri[k + 1]
            if u == 0 and w == 0:
                continue
            for j in range(k + 2, n):
                ri[j] += (u * rk1[j] - w * rk[j]) / piv
    assert result.denominator == 1
    return int(result)


def integer_sqrt(x: int) -> int:
    """Floor of the square root of a nonnegative integer."""
    if x < 0:
        raise ValueError("integer_sqrt of a negative number")
    return math.isqrt(x)
