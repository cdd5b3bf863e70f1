"""Exact linear algebra over the field of rational functions."""

from __future__ import annotations

from typing import Sequence

from cpoisson.expr import ONE, ZERO, Expr

Matrix = tuple[tuple[Expr, ...], ...]


class SingularMatrixError(ArithmeticError):
    pass


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Expr.coerce(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(_dot(row, col) for col in bt) for row in a)


def matvec(a: Matrix, v: Sequence[Expr]) -> tuple[Expr, ...]:
    return tuple(_dot(row, v) for row in a)


def _dot(u, v) -> Expr:
    total = ZERO
    for x, y in zip(u, v):
        if not (x.is_zero() or y.is_zero()):
            total = total + x * y
    return total


def _eliminate(m: list[list[Expr]], rhs: list[list[Expr]]) -> None:
    """Gauss-Jordan elimination in place; ``rhs`` columns are carried along."""
    n = len(m)
    for col in range(n):
        pivot = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular over the rational-function field")
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            rhs[col], rhs[pivot] = rhs[pivot], rhs[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        rhs[col] = [x / p for x in rhs[col]]
        for r in range(n):
            f = m[r][col]
            if r == col or f.is_zero():
                continue
            m[r] = [x - f * y for x, y in zip(m[r], m[col])]
            rhs[r] = [x - f * y for x, y in zip(rhs[r], rhs[col])]


def solve(a: Matrix, b: Sequence[Expr]) -> tuple[Expr, ...]:
    """Solve ``a x = b`` exactly."""
    m = [list(row) for row in a]
    rhs = [[Expr.coerce(x)] for x in b]
    _eliminate(m, rhs)
    return tuple(r[0] for r in rhs)


def inverse(a: Matrix) -> Matrix:
    m = [list(row) for row in a]
    rhs = [list(row) for row in identity(len(a))]
    _eliminate(m, rhs)
    return tuple(tuple(r) for r in rhs)


def det(a: Matrix) -> Expr:
    """Determinant by fraction-field elimination."""
    m = [list(row) for row in a]
    n = len(m)
    out = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            out = -out
        p = m[col][col]
        out = out * p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if not f.is_zero():
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return out


def is_symmetric(a: Matrix) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))


def is_skew(a: Matrix) -> bool:
    n = len(a)
    return all((a[i][j] + a[j][i]).is_zero() for i in range(n) for j in range(i, n))
