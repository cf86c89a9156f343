"""Seeded generators and independent oracles shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from opa_lab.gaussian import GaussianRational
from opa_lab.poly2 import BiPoly


def rand_rational(rng: random.Random, height: int = 8) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def rand_gaussian(rng: random.Random, height: int = 8, complex_: bool = True) -> GaussianRational:
    return GaussianRational(rand_rational(rng, height), rand_rational(rng, height) if complex_ else 0)


def rand_poly(rng: random.Random, n: int, m: int, height: int = 8, complex_: bool = False,
              density: float = 1.0, nonzero_origin: bool = False) -> BiPoly:
    while True:
        terms = {}
        for a in range(n + 1):
            for b in range(m + 1):
                if rng.random() <= density:
                    terms[(a, b)] = rand_gaussian(rng, height, complex_)
        p = BiPoly(terms)
        if p.is_zero():
            continue
        if nonzero_origin and not p.coeff(0, 0):
            continue
        return p


def rand_univariate(rng: random.Random, deg: int, height: int = 8) -> list[Fraction]:
    while True:
        c = [rand_rational(rng, height) for _ in range(deg + 1)]
        if c[0] and c[-1]:
            return c


def rand_disk_point(rng: random.Random, den: int = 16) -> GaussianRational:
    while True:
        g = GaussianRational(Fraction(rng.randint(-den, den), den), Fraction(rng.randint(-den, den), den))
        if g.abs2() < 1:
            return g


def lstsq_opa(f: BiPoly, basis) -> np.ndarray:
    """Float least-squares minimiser of ||p f - 1|| over span(basis): an oracle
    independent of the Gram-matrix path."""
    exps = sorted({(a + s, b + t) for s, t in basis for (a, b) in f.terms})
    terms = {e: complex(c) for e, c in f.terms.items()}
    M = np.array([[terms.get((x - s, y - t), 0) for s, t in basis] for x, y in exps])
    target = np.array([1.0 if e == (0, 0) else 0.0 for e in exps])
    return np.linalg.lstsq(M, target, rcond=None)[0]


def torus_inner_product(f: BiPoly, g: BiPoly, grid: int = 64) -> complex:
    """Riemann sum of f * conj(g) over the torus with normalised measure."""
    t = 2 * np.pi * np.arange(grid) / grid
    Zg, Wg = np.meshgrid(np.exp(1j * t), np.exp(1j * t), indexing="ij")

    def ev(p):
        out = np.zeros_like(Zg)
        for (a, b), c in p.terms.items():
            out = out + complex(c) * Zg**a * Wg**b
        return out

    return complex(np.mean(ev(f) * np.conj(ev(g))))


def float_eval(p: BiPoly, z: complex, w: complex) -> complex:
    return sum(complex(c) * z**a * w**b for (a, b), c in p.terms.items())


# The n = 2 approximant of this f vanishes inside the open bidisk: an explicit
# failure of the strong conjecture (f itself also has zeros there).
STRONG_COUNTEREXAMPLE = BiPoly({
    (0, 0): 4, (1, 0): 3, (0, 1): 7, (2, 0): -16, (1, 1): 28, (0, 2): -11,
    (3, 0): -18, (2, 1): 10, (1, 2): 17, (0, 3): -18, (3, 1): -16, (2, 2): 28,
    (1, 3): -12, (3, 2): 3, (2, 3): 7, (3, 3): 4,
})
