"""Optimal polynomial approximants to ``1/f`` in the Hardy space of the bidisk.

The ``n``-th approximant ``p_n[f]`` minimises ``||p f - 1||`` over
``p in span{chi_0, ..., chi_n}``. Its coefficients solve the normal
equations of that least-squares problem, which are assembled and solved here
in exact Gaussian-rational arithmetic.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .gaussian import GaussianRational, as_gaussian
from .poly2 import (
    BiPoly,
    ONE,
    chi_exponents,
    evaluate,
    inner_product,
    monomial_shift,
)
from .zeros import univariate_roots

__all__ = [
    "OptimalSystem",
    "OpaResult",
    "DetCriterion",
    "build_optimal_system",
    "solve_opa",
    "solve_opa_batch",
    "orthogonality_residual",
    "det_criterion",
    "det_criterion_float",
    "check_const_equiv",
    "p0_product_check",
    "one_variable_factor_roots",
    "chi_basis",
    "worker_count",
]

Exponent = tuple[int, int]


def chi_basis(n: int) -> tuple[Exponent, ...]:
    return tuple(chi_exponents(j) for j in range(n + 1))


@dataclass(frozen=True)
class OptimalSystem:
    """Gram matrix ``gram[j][k] = <chi_j f, chi_k f>`` and right-hand side.

    The normal equations read ``sum_k a_k <chi_k f, chi_j f> = <1, chi_j f>``,
    i.e. they use the transpose of ``gram`` (equal to its entrywise conjugate).
    For real coefficients the two coincide.
    """

    degree: int
    gram: tuple[tuple[GaussianRational, ...], ...]
    rhs: tuple[GaussianRational, ...]
    basis: tuple[Exponent, ...]

    def matrix(self) -> list[list[GaussianRational]]:
        n = len(self.gram)
        return [[self.gram[k][j] for k in range(n)] for j in range(n)]


@dataclass(frozen=True)
class OpaResult:
    poly: BiPoly
    degree: int
    error_sq: Fraction
    coefficients: tuple[GaussianRational, ...]
    basis: tuple[Exponent, ...]


@dataclass(frozen=True)
class DetCriterion:
    det_gram: Fraction
    det_g0: GaussianRational


def _autocorrelation(f: BiPoly):
    terms = f.terms
    cache: dict[Exponent, GaussianRational] = {}

    def corr(d: Exponent) -> GaussianRational:
        # <z^s f, z^t f> with d = s - t equals sum_e f_e * conj(f_{e+d})
        if d not in cache:
            acc = GaussianRational(0)
            for (a, b), c in terms.items():
                other = terms.get((a + d[0], b + d[1]))
                if other is not None:
                    acc = acc + c * other.conjugate()
            cache[d] = acc
        return cache[d]

    return corr


def build_optimal_system(f: BiPoly, n: int, basis: Sequence[Exponent] | None = None) -> OptimalSystem:
    if f.is_zero():
        raise ValueError("f must not be identically zero")
    if n < 0:
        raise ValueError("degree must be nonnegative")
    basis = tuple(basis) if basis is not None else chi_basis(n)
    if len(basis) != n + 1:
        raise ValueError("basis length must be n + 1")
    corr = _autocorrelation(f)
    size = n + 1
    gram = [[GaussianRational(0)] * size for _ in range(size)]
    for j in range(size):
        sj = basis[j]
        for k in range(j, size):
            sk = basis[k]
            v = corr((sj[0] - sk[0], sj[1] - sk[1]))
            gram[j][k] = v
            gram[k][j] = v.conjugate()
    rhs = [GaussianRational(0)] * size
    # <1, chi_j f> = conj of the constant coefficient of chi_j f
    for j, (a, b) in enumerate(basis):
        if a == 0 and b == 0:
            rhs[j] = f.coeff(0, 0).conjugate()
    return OptimalSystem(n, tuple(map(tuple, gram)), tuple(rhs), basis)


def solve_opa(f: BiPoly, n: int, basis: Sequence[Exponent] | None = None) -> OpaResult:
    """Exact ``n``-th optimal polynomial approximant to ``1/f``.

    ``basis`` overrides the monomials ``chi_0..chi_n``; pass ``[(j, 0) for j
    in range(n + 1)]`` for the one-variable problem.
    """
    system = build_optimal_system(f, n, basis)
    if not any(system.rhs):
        coeffs = [GaussianRational(0)] * (n + 1)
    else:
        coeffs = linalg.solve(system.matrix(), system.rhs)
    poly = BiPoly({e: c for e, c in zip(system.basis, coeffs)})
    err = (poly * f - ONE).norm2()
    return OpaResult(poly, n, err, tuple(coeffs), system.basis)


def _solve_pair(args):
    f_json, n = args
    return solve_opa(BiPoly.from_json(f_json), n)


def worker_count(requested: int | None = None) -> int:
    """Worker processes to use; ``OPA_LAB_THREADS`` caps the count."""
    cap = os.environ.get("OPA_LAB_THREADS")
    n = requested or os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def solve_opa_batch(pairs: Iterable[tuple[BiPoly, int]], workers: int | None = None) -> list[OpaResult]:
    """Solve many ``(f, n)`` problems; results are returned in input order."""
    pairs = list(pairs)
    workers = worker_count(workers)
    if workers == 1 or len(pairs) < 2:
        return [solve_opa(f, n) for f, n in pairs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_solve_pair, [(f.to_json(), n) for f, n in pairs]))


def orthogonality_residual(f: BiPoly, result: OpaResult) -> Fraction:
    """``max_j |<1 - p f, chi_j f>|**2``; zero exactly for a true projection."""
    if len(result.basis) != result.degree + 1:
        raise ValueError("result basis does not match its degree")
    support = set(result.poly.terms)
    if not support <= set(result.basis):
        raise ValueError("approximant has terms outside its degree")
    resid = ONE - result.poly * f
    worst = Fraction(0)
    for e in result.basis:
        v = inner_product(resid, monomial_shift(f, e)).abs2()
        if v > worst:
            worst = v
    return worst


def _check_alpha(alpha) -> tuple[GaussianRational, GaussianRational]:
    a1, a2 = (as_gaussian(a) for a in alpha)
    if a1.abs2() >= 1 or a2.abs2() >= 1:
        raise ValueError("alpha must lie in the open bidisk")
    return a1, a2


def det_criterion(f: BiPoly, n: int, alpha) -> DetCriterion:
    """Determinants governing whether ``p_n[f]`` vanishes at ``alpha``.

    ``det_gram`` is the Gram determinant. ``det_g0`` is the Cramer numerator
    for the constant coefficient of the projection of the kernel ``k_alpha``
    onto ``P_n f``: the system matrix with its first column replaced by
    ``<k_alpha, chi_j f> = conj((chi_j f)(alpha))``. The identity

        p_n[f](alpha) * f(alpha) * det_gram == conj(f(0)) * conj(det_g0)

    holds exactly, so ``p_n[f](alpha) = 0`` iff ``det_g0 = 0`` when
    ``f(alpha) != 0``.
    """
    a1, a2 = _check_alpha(alpha)
    system = build_optimal_system(f, n)
    mat = system.matrix()
    det_gram = linalg.det(mat)
    if not det_gram.is_real():
        raise ArithmeticError("Gram determinant must be real")
    col = [evaluate(monomial_shift(f, e), a1, a2).conjugate() for e in system.basis]
    g0 = [[col[j]] + list(row[1:]) for j, row in enumerate(mat)]
    return DetCriterion(det_gram.re, linalg.det(g0))


def det_criterion_float(f: BiPoly, n: int, alpha: tuple[complex, complex]) -> tuple[float, complex]:
    """Floating-point version of :func:`det_criterion` for arbitrary ``alpha``."""
    a1, a2 = complex(alpha[0]), complex(alpha[1])
    if abs(a1) >= 1 or abs(a2) >= 1:
        raise ValueError("alpha must lie in the open bidisk")
    system = build_optimal_system(f, n)
    mat = np.array([[complex(x) for x in row] for row in system.matrix()])
    arr = f.to_array()
    col = []
    for a, b in system.basis:
        zp = a1 ** np.arange(arr.shape[0]) * a1 ** a
        wp = a2 ** np.arange(arr.shape[1]) * a2 ** b
        col.append(np.conj(zp @ arr @ wp))
    g0 = mat.copy()
    g0[:, 0] = col
    return float(np.linalg.det(mat).real), complex(np.linalg.det(g0))


def _require_nonzero_origin(*polys: BiPoly) -> None:
    for p in polys:
        if not p.coeff(0, 0):
            raise ValueError("function must not vanish at the origin")


def check_const_equiv(f: BiPoly, g: BiPoly, n: int) -> GaussianRational | None:
    """Return ``c`` with ``p_n[f] = c * p_n[g]`` exactly, or ``None``."""
    _require_nonzero_origin(f, g)
    a = solve_opa(f, n).coefficients
    b = solve_opa(g, n).coefficients
    idx = next((i for i in range(n + 1) if a[i] or b[i]), None)
    if idx is None or not a[idx] or not b[idx]:
        return None
    c = a[idx] / b[idx]
    if all(x == c * y for x, y in zip(a, b)):
        return c
    return None


def p0_product_check(g: BiPoly, h: BiPoly) -> tuple[BiPoly, BiPoly]:
    """``(p_0[g h], p_0[g] * p_0[h])`` for ``g = g(z)`` and ``h = h(w)``."""
    if any(b for _, b in g.terms):
        raise ValueError("g must depend on z only")
    if any(a for a, _ in h.terms):
        raise ValueError("h must depend on w only")
    _require_nonzero_origin(g, h)
    lhs = solve_opa(g * h, 0).poly
    rhs = solve_opa(g, 0).poly * solve_opa(h, 0).poly
    return lhs, rhs


def _factor_roots(columns: list[list[GaussianRational]]) -> list[complex]:
    gcd = linalg.poly_gcd(columns)
    if len(gcd) < 2:
        return []
    return [complex(r) for r in univariate_roots(np.array([complex(c) for c in gcd]))]


def one_variable_factor_roots(p: BiPoly) -> dict[str, list[complex]]:
    """Roots ``a`` of every factor ``(z - a)`` and ``(w - b)`` dividing ``p``.

    Writing ``p = sum_k c_k(z) w**k``, the ``z``-factors are exactly the
    factors of ``gcd_k c_k``; the exact gcd is taken over Q(i) and only its
    roots are computed in floating point.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    n, m = p.bidegree
    terms = p.terms
    zero = GaussianRational(0)
    by_w = [[terms.get((a, b), zero) for a in range(n + 1)] for b in range(m + 1)]
    by_z = [[terms.get((a, b), zero) for b in range(m + 1)] for a in range(n + 1)]
    return {"z": _factor_roots(by_w), "w": _factor_roots(by_z)}
