"""Weak innerness, the power-index map and approximant plateaus."""

from __future__ import annotations

from dataclasses import dataclass

from .poly2 import BiPoly, chi_exponents, chi_index, compose_univariate, inner_product, monomial_shift
from .opa import solve_opa

__all__ = [
    "pound",
    "is_weakly_inner",
    "weak_inner_failure",
    "is_inner",
    "bidegree_complete_index",
    "constant_opa_check",
    "Plateau",
    "plateau_values",
    "plateau_check",
]


def pound(k: int, n: int) -> int:
    """Index ``j`` with ``chi_k ** n == chi_j``."""
    if n < 0:
        raise ValueError("power must be nonnegative")
    a, b = chi_exponents(k)
    return chi_index((n * a, n * b))


def weak_inner_failure(f: BiPoly) -> tuple[int, int] | None:
    """First shift ``(a, b) != (0, 0)`` with ``<f, z^a w^b f> != 0``, in chi order.

    Shifts outside the bidegree box have disjoint support and vanish, so
    checking the box decides weak innerness for polynomials.
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    n, m = f.bidegree
    shifts = sorted(((a, b) for a in range(n + 1) for b in range(m + 1) if a or b), key=chi_index)
    for s in shifts:
        if inner_product(f, monomial_shift(f, s)):
            return s
    return None


def is_weakly_inner(f: BiPoly) -> bool:
    return weak_inner_failure(f) is None


def is_inner(f: BiPoly) -> bool:
    """Polynomial inner functions are unimodular multiples of a monomial."""
    if f.is_zero():
        return False
    terms = f.terms
    return len(terms) == 1 and next(iter(terms.values())).abs2() == 1


def bidegree_complete_index(f: BiPoly) -> int:
    """Smallest ``N`` with every monomial of the bidegree box among ``chi_0..chi_N``."""
    return chi_index(f.bidegree)


def constant_opa_check(f: BiPoly, n_max: int) -> bool:
    """True iff ``p_n[f] == p_0[f]`` for every ``n <= n_max``."""
    if not f.coeff(0, 0):
        raise ValueError("f must not vanish at the origin")
    p0 = solve_opa(f, 0).poly
    return all(solve_opa(f, n).poly == p0 for n in range(1, n_max + 1))


@dataclass(frozen=True)
class Plateau:
    start: int
    end: int
    poly: BiPoly

    def to_json(self) -> dict:
        return {"start": self.start, "end": self.end, "poly": self.poly.to_json()}


def _as_h(h) -> BiPoly:
    if isinstance(h, BiPoly):
        return h
    return BiPoly.from_univariate(h)


def _ranges(k: int, j_max: int) -> list[tuple[int, int]]:
    if k == 0:
        return [(0, j_max)]
    return [(pound(k, j), pound(k, j + 1) - 1) for j in range(j_max + 1)]


def plateau_values(h, k: int, j_max: int) -> list[Plateau]:
    """Approximants of ``f = h(chi_k)`` at the start of each plateau ``[L(k,j), L(k,j+1))``.

    For ``k = 0`` the function is constant and the single range ``0..j_max``
    is returned.
    """
    h = _as_h(h)
    if not h.coeff(0, 0):
        raise ValueError("h must not vanish at the origin")
    f = compose_univariate(h, k)
    return [Plateau(lo, hi, solve_opa(f, lo).poly) for lo, hi in _ranges(k, j_max)]


def plateau_check(h, k: int, j_max: int) -> bool:
    """Verify ``p_N[f] == p_{L(k,j)}[f]`` for every ``N`` in each plateau, ``j <= j_max``."""
    h = _as_h(h)
    if not h.coeff(0, 0):
        raise ValueError("h must not vanish at the origin")
    f = compose_univariate(h, k)
    for lo, hi in _ranges(k, j_max):
        ref = solve_opa(f, lo).poly
        if any(solve_opa(f, n).poly != ref for n in range(lo + 1, hi + 1)):
            return False
    return True
