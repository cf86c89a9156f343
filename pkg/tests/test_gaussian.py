from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from opa_lab.gaussian import GaussianRational, as_gaussian, format_rational, parse_rational

fractions = st.fractions(min_value=-100, max_value=100, max_denominator=50)
gaussians = st.builds(GaussianRational, fractions, fractions)


def test_parse_and_format():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational(" -7 ") == -7
    assert format_rational(Fraction(6, 8)) == "3/4"
    assert format_rational(Fraction(5)) == "5/1"
    with pytest.raises(ValueError):
        parse_rational("0.5")
    with pytest.raises(TypeError):
        parse_rational(0.5)


def test_floats_refused():
    with pytest.raises(TypeError):
        GaussianRational(0.5)
    with pytest.raises(TypeError):
        GaussianRational(1) + 0.5


def test_basic_arithmetic():
    i = GaussianRational(0, 1)
    assert i * i == -1
    assert (1 + i) * (1 - i) == 2
    assert GaussianRational(3, 4).abs2() == 25
    assert 1 / (1 + i) == GaussianRational(Fraction(1, 2), Fraction(-1, 2))
    assert (1 + i) ** 4 == -4
    assert complex(GaussianRational(Fraction(1, 2), -2)) == 0.5 - 2j
    with pytest.raises(ZeroDivisionError):
        GaussianRational(1) / GaussianRational(0)


@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * (b + c) == a * b + a * c
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a * b).abs2() == a.abs2() * b.abs2()
    if b:
        assert (a / b) * b == a


@given(gaussians)
def test_json_round_trip(a):
    assert GaussianRational.from_json(a.to_json()) == a
    assert hash(as_gaussian(a)) == hash(a)


def test_from_complex():
    g = GaussianRational.from_complex(0.25 - 0.5j)
    assert g == GaussianRational(Fraction(1, 4), Fraction(-1, 2))
    assert GaussianRational.from_complex(1 / 3, max_denominator=10) == Fraction(1, 3)
