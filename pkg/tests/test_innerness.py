import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from helpers import rand_poly
from opa_lab.gaussian import GaussianRational
from opa_lab.innerness import (
    bidegree_complete_index,
    constant_opa_check,
    is_inner,
    is_weakly_inner,
    plateau_check,
    plateau_values,
    pound,
    weak_inner_failure,
)
from opa_lab.opa import solve_opa
from opa_lab.poly2 import ONE, BiPoly, W, Z, chi_exponents, chi_index, compose_univariate

F = Fraction


def test_pound_values():
    assert all(pound(0, n) == 0 for n in range(51))
    assert pound(1, 2) == 3
    assert pound(2, 2) == 5
    assert pound(4, 1) == 4 and pound(4, 2) == 12 and pound(4, 3) == 24
    with pytest.raises(ValueError):
        pound(1, -1)


def test_pound_against_multiplication():
    for k in range(101):
        a, b = chi_exponents(k)
        mono = BiPoly.monomial(a, b)
        acc = ONE
        for n in range(6):
            (e,) = acc.terms
            assert pound(k, n) == chi_index(e)
            acc = acc * mono


def test_weak_innerness():
    assert is_weakly_inner(ONE)
    assert is_weakly_inner(Z * W)
    assert weak_inner_failure(1 - Z) == (1, 0)
    assert weak_inner_failure(1 + W * W) == (0, 2)
    assert is_inner(GaussianRational(F(3, 5), F(4, 5)) * Z)
    assert not is_inner(2 * Z)
    assert not is_inner(1 - Z)
    with pytest.raises(ValueError):
        weak_inner_failure(BiPoly())


def test_weakly_inner_nonmonomial():
    # exponent differences (1, -1) and (1, -2) are not nonnegative shifts
    assert weak_inner_failure(Z - W * W) is None
    g = Z + W
    assert weak_inner_failure(g) is None
    assert not is_inner(g)


@given(st.integers(0, 10**6))
def test_weak_innerness_shift_invariant(seed):
    rng = random.Random(seed)
    f = rand_poly(rng, 2, 2, height=3, complex_=True, density=0.4)
    a, b = rng.randint(0, 3), rng.randint(0, 3)
    assert is_weakly_inner(f) == is_weakly_inner(f * BiPoly.monomial(a, b))


def test_constant_opa_check_examples():
    assert constant_opa_check(ONE, 10)
    assert constant_opa_check(BiPoly.constant(GaussianRational(2, -1)), 5)
    assert not constant_opa_check(1 - Z, 1)
    assert not constant_opa_check(1 - Z * W, bidegree_complete_index(1 - Z * W))
    with pytest.raises(ValueError):
        constant_opa_check(Z, 3)


def test_bidegree_complete_index():
    f = 1 - Z * W
    assert bidegree_complete_index(f) == 4
    assert bidegree_complete_index(ONE) == 0


def test_plateaus_of_one_minus_zw():
    ps = plateau_values([1, -1], 4, 2)
    assert [(p.start, p.end) for p in ps] == [(0, 3), (4, 11), (12, 23)]
    assert ps[0].poly == BiPoly.constant(F(1, 2))
    assert ps[1].poly == F(2, 3) + F(1, 3) * Z * W
    assert ps[2].poly == F(3, 4) + F(1, 2) * Z * W + F(1, 4) * (Z * W) ** 2
    assert plateau_check([1, -1], 4, 2)


def test_plateau_values_match_univariate_approximants():
    # p_{L(k,j)}[h(chi_k)] = p_j[h](chi_k)
    h = [2, -1, F(1, 3)]
    for k in (1, 2, 3, 5):
        f = compose_univariate(h, k)
        for j, pl in enumerate(plateau_values(h, k, 3)):
            uni = solve_opa(BiPoly.from_univariate(h), j, basis=[(i, 0) for i in range(j + 1)]).poly
            q = [uni.coeff(i, 0) for i in range(j + 1)]
            assert pl.poly == compose_univariate(q, k)
            assert solve_opa(f, pl.end).poly == pl.poly


def test_plateau_edge_cases():
    assert plateau_check([3], 7, 2)
    assert plateau_check([1, 2], 0, 5)
    assert [(p.start, p.end) for p in plateau_values([1, 2], 0, 5)] == [(0, 5)]
    assert plateau_check(1 - Z, 1, 4)
    with pytest.raises(ValueError):
        plateau_check([0, 1], 2, 2)
