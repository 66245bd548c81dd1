"""Exact Gaussian elimination over any field whose elements support ``+ - * /``.

Works with :class:`fractions.Fraction` and :class:`cykit.scalar.CycScalar`
alike; zero testing relies on ``bool(x)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

from .errors import DivisionByZero

Matrix = list[list[Any]]


def _copy(m: Sequence[Sequence[Any]]) -> Matrix:
    # plain ints would fall into float division below
    return [[Fraction(x) if isinstance(x, int) else x for x in row] for row in m]


def _one_like(x: Any) -> Any:
    return x * 0 + 1


def det(m: Sequence[Sequence[Any]]) -> Any:
    """Determinant by row reduction over the field."""
    a = _copy(m)
    n = len(a)
    if n == 0:
        return 1
    result = _one_like(a[0][0])
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return result * 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        p = a[col][col]
        result = result * p
        inv = 1 / p
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return result


def rank(m: Sequence[Sequence[Any]]) -> int:
    a = _copy(m)
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    for col in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][col]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][col]
        for i in range(rows):
            if i != r and a[i][col]:
                f = a[i][col] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def solve_many(m: Sequence[Sequence[Any]], rhs: Sequence[Sequence[Any]]) -> Matrix:
    """Solve ``m @ X = rhs`` for square nonsingular ``m``; ``rhs`` is n x k."""
    n = len(m)
    a = _copy([list(m[i]) + list(rhs[i]) for i in range(n)])
    width = len(a[0]) if a else 0
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise DivisionByZero("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:width] for row in a]


def solve(m: Sequence[Sequence[Any]], b: Sequence[Any]) -> list[Any]:
    return [row[0] for row in solve_many(m, [[x] for x in b])]


def inverse(m: Sequence[Sequence[Any]]) -> Matrix:
    n = len(m)
    if n == 0:
        return []
    one = _one_like(m[0][0])
    zero = one * 0
    ident = [[one if i == j else zero for j in range(n)] for i in range(n)]
    return solve_many(m, ident)


def matmul(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), a[0][0] * 0) for col in bt] for row in a]


def inertia(q: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """Return ``(n_plus, n_minus, n_zero)`` of a symmetric rational matrix.

    Diagonalizes by exact congruence over the rationals (Sylvester).
    """
    a = [[Fraction(x) for x in row] for row in q]
    n = len(a)
    pos = neg = 0
    k = 0
    active = list(range(n))
    while active:
        k = active[0]
        if a[k][k] == 0:
            j = next((j for j in active if a[j][j] != 0), None)
            if j is not None:
                k = j
            else:
                pair = next(((i, j) for i in active for j in active
                             if i != j and a[i][j] != 0), None)
                if pair is None:
                    break
                i, j = pair
                # row/col i += row/col j gives a[i][i] = 2 a[i][j] != 0
                for t in range(n):
                    a[i][t] += a[j][t]
                for t in range(n):
                    a[t][i] += a[t][j]
                k = i
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(k)
        for i in active:
            if a[i][k] != 0:
                f = a[i][k] / p
                for t in range(n):
                    a[i][t] -= f * a[k][t]
                for t in range(n):
                    a[t][i] -= f * a[t][k]
    return pos, neg, n - pos - neg


def signature(q: Sequence[Sequence[int]]) -> int:
    pos, neg, _ = inertia(q)
    return pos - neg
