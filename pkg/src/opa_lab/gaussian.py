"""Exact complex scalars with rational real and imaginary parts."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["GaussianRational", "as_gaussian", "parse_rational", "format_rational"]


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` (or an int, or a Fraction) into a Fraction.

    Decimal strings are rejected so that no float ever leaks into exact data.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"expected 'p/q' string, got {type(text).__name__}")
    s = text.strip()
    if any(ch in s for ch in ".eE"):
        raise ValueError(f"decimal notation not allowed in exact rational: {text!r}")
    return Fraction(s)


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class GaussianRational:
    """An element ``re + i*im`` of Q(i).

    Instances are immutable and hashable; arithmetic with ``int`` and
    ``Fraction`` operands is promoted automatically. Floats are refused.
    """

    __slots__ = ("_re", "_im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            if im:
                raise TypeError("cannot combine a GaussianRational with an imaginary part")
            re, im = re._re, re._im
        self._re = _to_fraction(re)
        self._im = _to_fraction(im)

    @property
    def re(self) -> Fraction:
        return self._re

    @property
    def im(self) -> Fraction:
        return self._im

    def conjugate(self) -> GaussianRational:
        return _gr(self._re, -self._im)

    def abs2(self) -> Fraction:
        """Exact squared modulus."""
        return self._re * self._re + self._im * self._im

    def is_real(self) -> bool:
        return self._im == 0

    def __complex__(self) -> complex:
        return complex(float(self._re), float(self._im))

    def __bool__(self) -> bool:
        return bool(self._re) or bool(self._im)

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._re == other._re and self._im == other._im

    def __hash__(self) -> int:
        if self._im == 0:
            return hash(self._re)
        return hash((self._re, self._im))

    def __neg__(self) -> GaussianRational:
        return _gr(-self._re, -self._im)

    def __pos__(self) -> GaussianRational:
        return self

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _gr(self._re + other._re, self._im + other._im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _gr(self._re - other._re, self._im - other._im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self._re, self._im, other._re, other._im
        if b == 0 and d == 0:
            return _gr(a * c, Fraction(0))
        return _gr(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = other.abs2()
        if n == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        a, b, c, d = self._re, self._im, other._re, other._im
        return _gr((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k: int) -> GaussianRational:
        if not isinstance(k, int):
            raise TypeError("only integer powers are exact")
        if k < 0:
            return GaussianRational(1) / (self ** -k)
        result = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __repr__(self) -> str:
        return f"GaussianRational({self._re!s}, {self._im!s})"

    def __str__(self) -> str:
        if self._im == 0:
            return str(self._re)
        if self._re == 0:
            return f"{self._im}i"
        sign = "+" if self._im > 0 else "-"
        return f"{self._re}{sign}{abs(self._im)}i"

    def to_json(self) -> dict:
        return {"re": format_rational(self._re), "im": format_rational(self._im)}

    @classmethod
    def from_json(cls, obj) -> GaussianRational:
        return cls(parse_rational(obj.get("re", "0/1")), parse_rational(obj.get("im", "0/1")))

    @classmethod
    def from_complex(cls, z: complex, max_denominator: int | None = None) -> GaussianRational:
        """Exact rational image of a float complex, optionally rounded to a bounded denominator."""
        re, im = Fraction(z.real), Fraction(z.imag)
        if max_denominator is not None:
            re, im = re.limit_denominator(max_denominator), im.limit_denominator(max_denominator)
        return cls(re, im)


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot build an exact rational from {type(x).__name__}")


def _gr(re: Fraction, im: Fraction) -> GaussianRational:
    g = object.__new__(GaussianRational)
    g._re = re
    g._im = im
    return g


_ZERO = Fraction(0)


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, Fraction):
        return _gr(x, _ZERO)
    if isinstance(x, int) and not isinstance(x, bool):
        return _gr(Fraction(x), _ZERO)
    return NotImplemented


def as_gaussian(x) -> GaussianRational:
    """Promote ints, Fractions and ``"p/q"`` strings; pass GaussianRationals through."""
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(x)
