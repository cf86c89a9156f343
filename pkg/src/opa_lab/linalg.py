"""Exact dense linear algebra and univariate polynomial arithmetic over Q(i)."""

from __future__ import annotations

from typing import Sequence

from .gaussian import GaussianRational, as_gaussian

__all__ = [
    "SingularMatrixError",
    "solve",
    "det",
    "is_hermitian",
    "poly_trim",
    "poly_divmod",
    "poly_gcd",
    "poly_eval",
    "poly_derivative",
]

Matrix = Sequence[Sequence[GaussianRational]]


class SingularMatrixError(ArithmeticError):
    pass


def _copy(a: Matrix) -> list[list[GaussianRational]]:
    return [[as_gaussian(x) for x in row] for row in a]


def solve(a: Matrix, b: Sequence) -> list[GaussianRational]:
    """Solve ``a @ x = b`` by Gaussian elimination with first-nonzero pivoting."""
    n = len(a)
    m = _copy(a)
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    if len(b) != n:
        raise ValueError("right-hand side has the wrong length")
    rhs = [as_gaussian(x) for x in b]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise SingularMatrixError(f"no nonzero pivot in column {col}")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = GaussianRational(1) / m[col][col]
        prow = m[col]
        for r in range(col + 1, n):
            factor = m[r][col]
            if not factor:
                continue
            factor = factor * inv
            row = m[r]
            for c in range(col, n):
                if prow[c]:
                    row[c] = row[c] - factor * prow[c]
            rhs[r] = rhs[r] - factor * rhs[col]
    x = [GaussianRational(0)] * n
    for r in range(n - 1, -1, -1):
        acc = rhs[r]
        row = m[r]
        for c in range(r + 1, n):
            if row[c] and x[c]:
                acc = acc - row[c] * x[c]
        x[r] = acc / row[r]
    return x


def det(a: Matrix) -> GaussianRational:
    n = len(a)
    if n == 0:
        return GaussianRational(1)
    m = _copy(a)
    sign = 1
    acc = GaussianRational(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return GaussianRational(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        pivot = m[col][col]
        acc = acc * pivot
        inv = GaussianRational(1) / pivot
        for r in range(col + 1, n):
            factor = m[r][col]
            if not factor:
                continue
            factor = factor * inv
            for c in range(col, n):
                if m[col][c]:
                    m[r][c] = m[r][c] - factor * m[col][c]
    return acc if sign > 0 else -acc


def is_hermitian(a: Matrix) -> bool:
    n = len(a)
    return all(a[j][k] == a[k][j].conjugate() for j in range(n) for k in range(j, n))


# Univariate polynomials are ascending coefficient lists with no trailing zeros.

def poly_trim(p: Sequence) -> list[GaussianRational]:
    out = [as_gaussian(c) for c in p]
    while out and not out[-1]:
        out.pop()
    return out


def poly_divmod(num: Sequence, den: Sequence) -> tuple[list[GaussianRational], list[GaussianRational]]:
    num, den = poly_trim(num), poly_trim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    if len(num) < len(den):
        return [], num
    rem = list(num)
    quot = [GaussianRational(0)] * (len(num) - len(den) + 1)
    lead_inv = GaussianRational(1) / den[-1]
    for shift in range(len(num) - len(den), -1, -1):
        c = rem[shift + len(den) - 1] * lead_inv
        quot[shift] = c
        if c:
            for i, d in enumerate(den):
                rem[shift + i] = rem[shift + i] - c * d
    return poly_trim(quot), poly_trim(rem[: len(den) - 1])


def poly_gcd(polys: Sequence[Sequence]) -> list[GaussianRational]:
    """Monic gcd of a family of univariate polynomials (``[]`` if all vanish)."""
    g: list[GaussianRational] = []
    for p in polys:
        p = poly_trim(p)
        a, b = g, p
        while b:
            _, r = poly_divmod(a, b) if a else ([], [])
            a, b = b, r
        g = a
        if len(g) == 1:
            break
    if not g:
        return []
    lead = g[-1]
    return [c / lead for c in g]


def poly_eval(p: Sequence, x) -> GaussianRational:
    x = as_gaussian(x)
    acc = GaussianRational(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_derivative(p: Sequence) -> list[GaussianRational]:
    return poly_trim([as_gaussian(c) * k for k, c in enumerate(p)][1:])
