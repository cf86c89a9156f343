"""Sparse bivariate polynomials over Q(i) and the degree-lexicographic monomial order.

Monomials ``z**a * w**b`` are enumerated by increasing total degree with ties
broken lexicographically (``z`` before ``w``)::

    chi_0 = 1, chi_1 = z, chi_2 = w, chi_3 = z**2, chi_4 = z*w, chi_5 = w**2, ...

Coefficients are :class:`GaussianRational`, so inner products, norms and
reflections are exact. Floating point only appears in :meth:`BiPoly.to_array`.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

import numpy as np

from .gaussian import GaussianRational, as_gaussian

__all__ = [
    "BiPoly",
    "Z",
    "W",
    "ONE",
    "chi_index",
    "chi_exponents",
    "inner_product",
    "multiply",
    "add",
    "scale",
    "monomial_shift",
    "evaluate",
    "reflect",
    "compose_univariate",
]

Exponent = tuple[int, int]


def chi_index(e: Exponent) -> int:
    """Position of ``z**a * w**b`` in the degree-lexicographic order."""
    a, b = e
    if a < 0 or b < 0:
        raise ValueError(f"exponents must be nonnegative, got {e}")
    t = a + b
    return t * (t + 1) // 2 + b


def chi_exponents(index: int) -> Exponent:
    """Inverse of :func:`chi_index`."""
    if index < 0:
        raise ValueError("chi index must be nonnegative")
    t = (math.isqrt(8 * index + 1) - 1) // 2
    b = index - t * (t + 1) // 2
    return t - b, b


class BiPoly:
    """Immutable sparse polynomial in ``z`` and ``w``.

    ``terms`` maps ``(a, b)`` to the coefficient of ``z**a * w**b``; zero
    coefficients are dropped on construction so equality is structural.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, object] | None = None):
        clean: dict[Exponent, GaussianRational] = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent ({a}, {b})")
            c = as_gaussian(c)
            if c:
                clean[(int(a), int(b))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> BiPoly:
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c) -> BiPoly:
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, a: int, b: int, c=1) -> BiPoly:
        return cls({(a, b): c})

    @classmethod
    def from_chi(cls, coeffs: Iterable) -> BiPoly:
        """Build ``sum_j coeffs[j] * chi_j``."""
        return cls({chi_exponents(j): c for j, c in enumerate(coeffs)})

    @classmethod
    def from_univariate(cls, coeffs: Iterable, var: str = "z") -> BiPoly:
        """Ascending coefficients of a one-variable polynomial in ``z`` or ``w``."""
        if var not in ("z", "w"):
            raise ValueError("var must be 'z' or 'w'")
        if var == "z":
            return cls({(k, 0): c for k, c in enumerate(coeffs)})
        return cls({(0, k): c for k, c in enumerate(coeffs)})

    @property
    def terms(self) -> Mapping[Exponent, GaussianRational]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponent, GaussianRational]]:
        return iter(sorted(self._terms.items(), key=lambda kv: chi_index(kv[0])))

    def coeff(self, a: int, b: int = 0) -> GaussianRational:
        return self._terms.get((a, b), GaussianRational(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(e == (0, 0) for e in self._terms)

    @property
    def bidegree(self) -> Exponent:
        if not self._terms:
            raise ValueError("the zero polynomial has no bidegree")
        return (max(a for a, _ in self._terms), max(b for _, b in self._terms))

    @property
    def total_degree(self) -> int:
        if not self._terms:
            raise ValueError("the zero polynomial has no degree")
        return max(a + b for a, b in self._terms)

    def max_chi(self) -> int:
        return max(chi_index(e) for e in self._terms) if self._terms else -1

    def norm2(self) -> Fraction:
        return sum((c.abs2() for c in self._terms.values()), Fraction(0))

    def conjugate_coefficients(self) -> BiPoly:
        return BiPoly._raw({e: c.conjugate() for e, c in self._terms.items()})

    def __call__(self, z, w) -> GaussianRational:
        return evaluate(self, z, w)

    def __eq__(self, other) -> bool:
        if isinstance(other, BiPoly):
            return self._terms == other._terms
        try:
            other = BiPoly.constant(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> BiPoly:
        return BiPoly._raw({e: -c for e, c in self._terms.items()})

    def __add__(self, other) -> BiPoly:
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other) -> BiPoly:
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other) -> BiPoly:
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return add(other, -self)

    def __mul__(self, other) -> BiPoly:
        if isinstance(other, BiPoly):
            return multiply(self, other)
        try:
            return scale(self, as_gaussian(other))
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int) -> BiPoly:
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self) -> str:
        return f"BiPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (a, b), c in self.items():
            mono = "*".join(
                s for s in (_pow_str("z", a), _pow_str("w", b)) if s
            )
            coef = str(c)
            if not c.is_real() and c.re != 0:
                coef = f"({coef})"
            parts.append(f"{coef}*{mono}" if mono else coef)
        return " + ".join(parts)

    def to_array(self) -> np.ndarray:
        """Dense complex array ``A[a, b]`` of coefficients (single float cast)."""
        n, m = self.bidegree
        out = np.zeros((n + 1, m + 1), dtype=complex)
        for (a, b), c in self._terms.items():
            out[a, b] = complex(c)
        return out

    def to_json(self) -> dict:
        terms = []
        for (a, b), c in self.items():
            terms.append({"a": a, "b": b, **c.to_json()})
        return {"terms": terms}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj) -> BiPoly:
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "terms" not in obj:
            raise ValueError("polynomial JSON must be an object with a 'terms' list")
        acc: dict[Exponent, GaussianRational] = {}
        for t in obj["terms"]:
            a, b = int(t["a"]), int(t["b"])
            acc[(a, b)] = acc.get((a, b), GaussianRational(0)) + GaussianRational.from_json(t)
        return cls(acc)


def _pow_str(var: str, k: int) -> str:
    if k == 0:
        return ""
    return var if k == 1 else f"{var}^{k}"


def _as_poly(x):
    if isinstance(x, BiPoly):
        return x
    try:
        return BiPoly.constant(as_gaussian(x))
    except TypeError:
        return NotImplemented


def add(f: BiPoly, g: BiPoly) -> BiPoly:
    out = dict(f._terms)
    for e, c in g._terms.items():
        s = out.get(e)
        s = c if s is None else s + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return BiPoly._raw(out)


def scale(f: BiPoly, c) -> BiPoly:
    c = as_gaussian(c)
    if not c:
        return BiPoly._raw({})
    return BiPoly._raw({e: v * c for e, v in f._terms.items()})


def multiply(f: BiPoly, g: BiPoly) -> BiPoly:
    out: dict[Exponent, GaussianRational] = {}
    for (a1, b1), c1 in f._terms.items():
        for (a2, b2), c2 in g._terms.items():
            e = (a1 + a2, b1 + b2)
            prev = out.get(e)
            out[e] = c1 * c2 if prev is None else prev + c1 * c2
    return BiPoly._raw({e: c for e, c in out.items() if c})


def monomial_shift(f: BiPoly, e: Exponent) -> BiPoly:
    """``z**a * w**b * f``; an isometry of the Hardy norm."""
    a, b = e
    if a < 0 or b < 0:
        raise ValueError("shift exponents must be nonnegative")
    return BiPoly._raw({(x + a, y + b): c for (x, y), c in f._terms.items()})


def inner_product(f: BiPoly, g: BiPoly) -> GaussianRational:
    """Hardy-space inner product ``sum c_f * conj(c_g)``, linear in the first slot."""
    small, large = (f, g) if len(f._terms) <= len(g._terms) else (g, f)
    acc = GaussianRational(0)
    for e in small._terms:
        if e in large._terms:
            acc = acc + f._terms[e] * g._terms[e].conjugate()
    return acc


def evaluate(f: BiPoly, z0, w0) -> GaussianRational:
    """Exact value ``f(z0, w0)``: Horner in ``w`` for each power of ``z``, then in ``z``."""
    z0, w0 = as_gaussian(z0), as_gaussian(w0)
    if not f._terms:
        return GaussianRational(0)
    rows: dict[int, dict[int, GaussianRational]] = {}
    for (a, b), c in f._terms.items():
        rows.setdefault(a, {})[b] = c
    n = max(rows)
    acc = GaussianRational(0)
    for a in range(n, -1, -1):
        row = rows.get(a)
        val = GaussianRational(0)
        if row:
            for b in range(max(row), -1, -1):
                val = val * w0 + row.get(b, GaussianRational(0))
        acc = acc * z0 + val
    return acc


def reflect(p: BiPoly) -> BiPoly:
    """``z**n * w**m * conj(p(1/conj(z), 1/conj(w)))`` for bidegree ``(n, m)``."""
    if p.is_zero():
        raise ValueError("cannot reflect the zero polynomial (bidegree undefined)")
    n, m = p.bidegree
    return BiPoly._raw({(n - a, m - b): c.conjugate() for (a, b), c in p._terms.items()})


def compose_univariate(h: BiPoly | Iterable, k: int) -> BiPoly:
    """``h(chi_k)`` for a one-variable ``h`` (given as a z-polynomial or ascending coefficients)."""
    if isinstance(h, BiPoly):
        if any(b for _, b in h._terms):
            raise ValueError("h must be a polynomial in z alone")
        coeffs = {a: c for (a, _), c in h._terms.items()}
    else:
        coeffs = {j: as_gaussian(c) for j, c in enumerate(h)}
    a, b = chi_exponents(k)
    out: dict[Exponent, GaussianRational] = {}
    for j, c in coeffs.items():
        e = (a * j, b * j)
        out[e] = out.get(e, GaussianRational(0)) + c
    return BiPoly(out)


Z = BiPoly.monomial(1, 0)
W = BiPoly.monomial(0, 1)
ONE = BiPoly.constant(1)
