"""Polynomials of the form ``alpha * det(I - C D)`` with ``D = diag(z,..,z, w,..,w)``.

A contractive ``C`` gives a polynomial with no zeros in the open bidisk; a
strict contraction gives one with no zeros in the closed bidisk.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gaussian import GaussianRational, parse_rational
from .poly2 import BiPoly

__all__ = [
    "DetRep",
    "expand",
    "expand_float",
    "evaluate_det",
    "operator_norm",
    "sample_strict_contraction",
    "augment",
    "combine",
    "load_matrix",
    "MAX_DIM",
]

MAX_DIM = 20
_COEFF_TRIM = 1e-12


@dataclass(frozen=True)
class DetRep:
    alpha: complex
    C: np.ndarray
    split: tuple[int, int]

    def __post_init__(self):
        C = np.atleast_2d(np.asarray(self.C, dtype=complex))
        if C.shape[0] != C.shape[1]:
            raise ValueError("C must be square")
        nz, nw = self.split
        if nz < 0 or nw < 0 or nz + nw != C.shape[0]:
            raise ValueError(f"split {self.split} does not match dimension {C.shape[0]}")
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "split", (int(nz), int(nw)))

    @property
    def dim(self) -> int:
        return self.C.shape[0]

    def diagonal(self, z: complex, w: complex) -> np.ndarray:
        nz, nw = self.split
        return np.array([z] * nz + [w] * nw, dtype=complex)


def expand_float(rep: DetRep) -> np.ndarray:
    """Dense coefficient array ``A[a, b]`` of ``alpha * det(I - C D)``.

    The principal minor of ``C D`` on a subset ``S`` is ``det(C[S, S])``
    times the product of the diagonal entries of ``D`` on ``S``, so the
    coefficient of ``z^a w^b`` collects ``(-1)^|S| det(C[S, S])`` over subsets
    with ``a`` indices in the z-block and ``b`` in the w-block.
    """
    n = rep.dim
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds the subset-enumeration limit {MAX_DIM}")
    nz, nw = rep.split
    out = np.zeros((nz + 1, nw + 1), dtype=complex)
    out[0, 0] = 1.0
    idx = np.arange(n)
    for size in range(1, n + 1):
        subsets = np.array(list(itertools.combinations(idx, size)))
        minors = rep.C[subsets[:, :, None], subsets[:, None, :]]
        dets = np.linalg.det(minors)
        a = (subsets < nz).sum(axis=1)
        sign = -1.0 if size % 2 else 1.0
        # unbuffered in-order accumulation keeps the output bit-stable
        np.add.at(out, (a, size - a), sign * dets)
    return rep.alpha * out


def expand(rep: DetRep, max_denominator: int = 10**12) -> BiPoly:
    """Expanded polynomial with coefficients rationalised after trimming below ``1e-12``."""
    arr = expand_float(rep)
    scale = max(np.max(np.abs(arr)), 1.0)
    terms = {}
    for (a, b), c in np.ndenumerate(arr):
        re = c.real if abs(c.real) > _COEFF_TRIM * scale else 0.0
        im = c.imag if abs(c.imag) > _COEFF_TRIM * scale else 0.0
        if re or im:
            terms[(a, b)] = GaussianRational.from_complex(complex(re, im), max_denominator)
    return BiPoly(terms)


def evaluate_det(rep: DetRep, z: complex, w: complex) -> complex:
    """Direct numeric ``alpha * det(I - C D(z, w))``."""
    d = rep.diagonal(z, w)
    return complex(rep.alpha * np.linalg.det(np.eye(rep.dim) - rep.C * d[None, :]))


def operator_norm(C) -> float:
    """Largest singular value."""
    C = np.atleast_2d(np.asarray(C, dtype=complex))
    if C.size == 0:
        return 0.0
    return float(np.linalg.svd(C, compute_uv=False)[0])


def sample_strict_contraction(n: int, seed: int, norm_cap: float) -> np.ndarray:
    """Seeded complex Gaussian matrix rescaled to operator norm ``norm_cap``."""
    if not 0 < norm_cap < 1:
        raise ValueError("norm_cap must lie in (0, 1)")
    if n < 1:
        raise ValueError("dimension must be positive")
    rng = np.random.default_rng(seed)
    C = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return C * (norm_cap / operator_norm(C))


def augment(rep: DetRep, extra: int) -> DetRep:
    """Pad ``C`` with ``extra`` zero rows/columns placed in the z-block.

    Padded indices only enter subsets whose minor has a zero row, so the
    expanded polynomial is unchanged.
    """
    if extra < 0:
        raise ValueError("extra must be nonnegative")
    if extra == 0:
        return rep
    nz, nw = rep.split
    n = rep.dim
    order = list(range(nz)) + list(range(n, n + extra)) + list(range(nz, n))
    big = np.zeros((n + extra, n + extra), dtype=complex)
    big[:n, :n] = rep.C
    big = big[np.ix_(order, order)]
    return DetRep(rep.alpha, big, (nz + extra, nw))


def combine(a: DetRep, b: DetRep) -> DetRep:
    """Block-diagonal representation of the product of two represented polynomials."""
    za, wa = a.split
    zb, wb = b.split
    na, nb = a.dim, b.dim
    big = np.zeros((na + nb, na + nb), dtype=complex)
    big[:na, :na] = a.C
    big[na:, na:] = b.C
    order = list(range(za)) + list(range(na, na + zb)) + list(range(za, na)) + list(range(na + zb, na + nb))
    return DetRep(a.alpha * b.alpha, big[np.ix_(order, order)], (za + zb, wa + wb))


def _scalar(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValueError("complex entries are [re, im] pairs")
        return complex(_real(x[0]), _real(x[1]))
    return complex(_real(x), 0.0)


def _real(x) -> float:
    if isinstance(x, str):
        return float(parse_rational(x)) if "/" in x else float(x)
    if isinstance(x, Fraction):
        return float(x)
    return float(x)


def load_matrix(obj) -> np.ndarray:
    """Row-major matrix JSON whose entries are ``[re, im]`` pairs or reals."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if isinstance(obj, dict):
        obj = obj.get("matrix", obj.get("C"))
    rows = [[_scalar(x) for x in row] for row in obj]
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix must be square")
    return np.array(rows, dtype=complex)
