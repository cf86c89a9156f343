"""Zero location of univariate and bivariate polynomials.

Bivariate classification uses the slice decomposition common in 2-D filter
stability testing: ``p`` has no zero in the closed bidisk iff

* ``p(z, 0)`` has no zero with ``|z| <= 1``, and
* for every ``z0`` on the unit circle, ``p(z0, .)`` has no zero with ``|w| <= 1``.

An independent polar-grid scan over ``|z| < 1`` looks for zeros inside the
open bidisk and polishes candidates with a minimum-norm Newton iteration.
Root finding goes through companion-matrix eigenvalues, except that batched
slices of effective degree one or two use closed forms.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from .poly2 import BiPoly

__all__ = [
    "Verdict",
    "ClassifyConfig",
    "StabilityReport",
    "univariate_roots",
    "batched_roots",
    "classify_bidisk",
    "min_root_modulus_on_torus",
]

_TRIM = 1e-12


class Verdict(str, Enum):
    ZERO_IN_OPEN_BIDISK = "ZeroInOpenBidisk"
    STABLE_NOT_STRONG = "StableNotStrong"
    STRONGLY_STABLE = "StronglyStable"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ClassifyConfig:
    torus_samples: int = 2048
    disk_grid: int = 128
    tolerance: float = 1e-7
    refine_iters: int = 40

    def __post_init__(self):
        if self.torus_samples < 1 or self.disk_grid < 1:
            raise ValueError("sample counts must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.refine_iters < 0:
            raise ValueError("refine_iters must be nonnegative")


@dataclass
class StabilityReport:
    verdict: Verdict
    margin: float
    tolerance: float
    probes: dict
    witness: tuple[complex, complex] | None = None
    witness_abs: float | None = None
    open_margin: float = math.inf
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        d = asdict(self)
        d["verdict"] = self.verdict.value
        d["margin"] = _json_float(self.margin)
        d["open_margin"] = _json_float(self.open_margin)
        if self.witness is not None:
            d["witness"] = [[v.real, v.imag] for v in self.witness]
        return d


def _json_float(x: float):
    if math.isfinite(x):
        return x
    return "inf" if x > 0 else "-inf"


# ---------------------------------------------------------------- univariate

def _trim_leading(coeffs: np.ndarray) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    if c.size == 0:
        return c
    cut = _TRIM * np.max(np.abs(c))
    nz = np.nonzero(np.abs(c) > cut)[0]
    if nz.size == 0:
        return c[:0]
    return c[: nz[-1] + 1]


def _companion_batch(c: np.ndarray) -> np.ndarray:
    # c: (N, m+1) ascending with nonzero leading column; returns (N, m) roots
    n_poly, m1 = c.shape
    m = m1 - 1
    comp = np.zeros((n_poly, m, m), dtype=complex)
    if m > 1:
        idx = np.arange(m - 1)
        comp[:, idx + 1, idx] = 1.0
    comp[:, :, m - 1] = -c[:, :m] / c[:, m:m1]
    return np.linalg.eigvals(comp)


def univariate_roots(coeffs) -> np.ndarray:
    """Roots of ``sum coeffs[k] * x**k`` (ascending order) via the companion matrix.

    Leading coefficients below ``1e-12`` relative to the largest are trimmed.
    Each root receives two Newton corrections, kept only when they shrink the
    residual.
    """
    c = _trim_leading(coeffs)
    if c.size < 2:
        raise ValueError("constant polynomial has no roots to locate")
    roots = _companion_batch(c[None, :])[0]
    dc = c[1:] * np.arange(1, c.size)
    for _ in range(2):
        val = np.polynomial.polynomial.polyval(roots, c)
        der = np.polynomial.polynomial.polyval(roots, dc)
        ok = np.abs(der) > 0
        step = np.where(ok, val / np.where(ok, der, 1.0), 0.0)
        cand = roots - step
        better = np.abs(np.polynomial.polynomial.polyval(cand, c)) < np.abs(val)
        roots = np.where(better, cand, roots)
    return roots


def batched_roots(c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Roots of many polynomials at once.

    ``c`` has shape ``(N, m+1)`` (ascending). Rows are grouped by effective
    degree after trimming. Returns ``(roots, kind)`` where ``roots`` is
    ``(N, m)`` padded with ``inf`` and ``kind`` is ``1`` for a genuine
    polynomial, ``0`` for a nonzero constant and ``-1`` for an identically
    zero row.
    """
    c = np.asarray(c, dtype=complex)
    n_poly, m1 = c.shape
    roots = np.full((n_poly, max(m1 - 1, 0)), np.inf, dtype=complex)
    kind = np.ones(n_poly, dtype=int)
    absc = np.abs(c)
    rowmax = absc.max(axis=1) if m1 else np.zeros(n_poly)
    big = absc > (_TRIM * rowmax)[:, None]
    # effective degree = last index above threshold
    rev = big[:, ::-1]
    has = big.any(axis=1)
    deg = np.where(has, m1 - 1 - np.argmax(rev, axis=1), -1)
    zero_rows = (~has) | (rowmax == 0)
    kind[zero_rows] = -1
    kind[(deg == 0) & ~zero_rows] = 0
    for d in np.unique(deg):
        if d < 1:
            continue
        rows = np.nonzero(deg == d)[0]
        if d == 1:
            roots[rows, 0] = -c[rows, 0] / c[rows, 1]
        elif d == 2:
            roots[rows, :2] = _quadratic_roots(c[rows, 0], c[rows, 1], c[rows, 2])
        else:
            roots[rows, :d] = _companion_batch(c[rows, : d + 1])
    return roots, kind


def _quadratic_roots(c0: np.ndarray, c1: np.ndarray, c2: np.ndarray) -> np.ndarray:
    # cancellation-free form; the eigenvalue path is reserved for degree >= 3
    disc = np.sqrt(c1 * c1 - 4 * c2 * c0)
    plus, minus = c1 + disc, c1 - disc
    q = -0.5 * np.where(np.abs(plus) >= np.abs(minus), plus, minus)
    safe = np.where(q == 0, 1.0, q)
    r1 = np.where(q == 0, 0.0, q / c2)
    r2 = np.where(q == 0, 0.0, c0 / safe)
    return np.stack([r1, r2], axis=1)


# ----------------------------------------------------------------- bivariate

def _slice_coeffs(arr: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """Coefficients in ``w`` of ``p(z, .)`` for every ``z`` in ``zs``."""
    n = arr.shape[0] - 1
    powers = zs[:, None] ** np.arange(n + 1)[None, :]
    return powers @ arr


def _min_modulus(roots: np.ndarray, kind: np.ndarray) -> np.ndarray:
    mins = np.full(kind.shape, np.inf)
    poly = kind == 1
    if roots.shape[1] and poly.any():
        mins[poly] = np.min(np.abs(roots[poly]), axis=1)
    mins[kind == -1] = -np.inf
    return mins


def _eval(arr: np.ndarray, z: complex, w: complex) -> complex:
    zp = z ** np.arange(arr.shape[0])
    wp = w ** np.arange(arr.shape[1])
    return complex(zp @ arr @ wp)


def _grad(arr: np.ndarray, z: complex, w: complex) -> tuple[complex, complex]:
    n, m = arr.shape[0] - 1, arr.shape[1] - 1
    zp = z ** np.arange(n + 1)
    wp = w ** np.arange(m + 1)
    dz = np.zeros(n + 1, dtype=complex)
    dw = np.zeros(m + 1, dtype=complex)
    if n:
        dz[1:] = np.arange(1, n + 1) * z ** np.arange(n)
    if m:
        dw[1:] = np.arange(1, m + 1) * w ** np.arange(m)
    return complex(dz @ arr @ wp), complex(zp @ arr @ dw)


def _polish(arr: np.ndarray, z: complex, w: complex, iters: int = 40) -> tuple[complex, complex, float]:
    """Minimum-norm Newton iteration on ``p(z, w) = 0`` in both coordinates."""
    val = _eval(arr, z, w)
    for _ in range(iters):
        gz, gw = _grad(arr, z, w)
        g2 = abs(gz) ** 2 + abs(gw) ** 2
        if g2 == 0 or val == 0:
            break
        nz = z - val * gz.conjugate() / g2
        nw = w - val * gw.conjugate() / g2
        nval = _eval(arr, nz, nw)
        if abs(nval) >= abs(val):
            break
        z, w, val = nz, nw, nval
    return z, w, abs(val)


def min_root_modulus_on_torus(p: BiPoly, z0_angle: float) -> float:
    """Smallest modulus of a ``w``-root of ``p(exp(i*angle), w)``.

    Returns ``-inf`` when the slice vanishes identically and raises
    ``ValueError`` when it is a nonzero constant.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    arr = p.to_array()
    if arr.shape[1] == 1:
        raise ValueError("polynomial is constant in w; slice has no roots")
    z0 = np.exp(1j * z0_angle)
    c = _slice_coeffs(arr, np.array([z0]))
    scale = np.abs(arr).sum()
    if np.max(np.abs(c)) <= _TRIM * scale:
        return -math.inf
    roots, kind = batched_roots(c)
    if kind[0] == 0:
        raise ValueError("slice is a nonzero constant in w")
    return float(np.min(np.abs(roots[0][np.isfinite(roots[0])])))


def _torus_profile(arr: np.ndarray, thetas: np.ndarray, scale: float):
    c = _slice_coeffs(arr, np.exp(1j * thetas))
    roots, kind = batched_roots(c)
    # relative-to-row trimming cannot see rows that are zero relative to p
    tiny = np.max(np.abs(c), axis=1) <= _TRIM * scale
    kind = np.where(tiny, -1, kind)
    return _min_modulus(roots, kind), roots, kind


def _golden_min(fun, lo: float, hi: float, iters: int) -> tuple[float, float]:
    phi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    x1, x2 = b - phi * (b - a), a + phi * (b - a)
    f1, f2 = fun(x1), fun(x2)
    for _ in range(iters):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - phi * (b - a)
            f1 = fun(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + phi * (b - a)
            f2 = fun(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def classify_bidisk(p: BiPoly, config: ClassifyConfig | None = None) -> StabilityReport:
    """Locate the zeros of ``p`` relative to the open and closed bidisk.

    ``margin`` is the smallest ``|root| - 1`` seen on the disk slice
    ``p(z, 0)`` and on the torus family ``p(exp(i t), .)``; ``open_margin``
    is the same quantity over the interior polar grid.
    """
    cfg = config or ClassifyConfig()
    tol = cfg.tolerance
    probes = asdict(cfg)
    if p.is_zero():
        raise ValueError("cannot classify the zero polynomial")
    if p.is_constant():
        return StabilityReport(Verdict.STRONGLY_STABLE, math.inf, tol, probes,
                               notes=["nonzero constant"])
    arr = p.to_array()
    scale = float(np.abs(arr).sum())
    notes: list[str] = []
    boundary: tuple[complex, complex] | None = None
    open_cands: list[tuple[float, int, complex, complex]] = []

    # (i) disk slice p(z, 0)
    col = arr[:, 0]
    if np.max(np.abs(col)) <= _TRIM * scale:
        return _open_report(arr, 0j, 0j, -math.inf, tol, probes, scale,
                            ["p(z, 0) vanishes identically"])
    margin = math.inf
    slice_z = _trim_leading(col)
    if slice_z.size >= 2:
        zr = univariate_roots(slice_z)
        k = int(np.argmin(np.abs(zr)))
        margin = float(np.abs(zr[k])) - 1.0
        boundary = (complex(zr[k]), 0j)
        for r in zr:
            if abs(r) < 1 - tol:
                open_cands.append((abs(r), -1, complex(r), 0j))

    # (ii) torus family
    if arr.shape[1] > 1:
        thetas = 2 * np.pi * np.arange(cfg.torus_samples) / cfg.torus_samples
        mins, roots, kind = _torus_profile(arr, thetas, scale)
        j = int(np.argmin(mins))
        torus_min = float(mins[j])
        best_theta = float(thetas[j])
        if cfg.refine_iters and np.isfinite(torus_min):
            step = 2 * np.pi / cfg.torus_samples

            def prof(t: float) -> float:
                return float(_torus_profile(arr, np.array([t]), scale)[0][0])

            prev, nxt = np.roll(mins, 1), np.roll(mins, -1)
            local = np.nonzero((mins <= prev) & (mins <= nxt) & np.isfinite(mins))[0]
            local = local[np.argsort(mins[local], kind="stable")][:4]
            for i in local:
                t, v = _golden_min(prof, thetas[i] - step, thetas[i] + step, cfg.refine_iters)
                if v < torus_min:
                    torus_min, best_theta = v, float(t)
        if torus_min - 1.0 < margin:
            margin = torus_min - 1.0
            z0 = complex(np.exp(1j * best_theta))
            if np.isfinite(torus_min):
                c = _slice_coeffs(arr, np.array([z0]))
                r, _ = batched_roots(c)
                r = r[0][np.isfinite(r[0])]
                boundary = (z0, complex(r[np.argmin(np.abs(r))]))
            else:
                boundary = (z0, 0j)
                notes.append("a torus slice vanishes identically")
        if -math.inf < margin < -tol and boundary is not None:
            # a torus root strictly inside the disk persists for |z| slightly below 1
            z0, w0 = boundary
            for delta in (1e-2, 1e-3, 1e-4, 1e-5, 1e-6):
                zi = z0 * (1 - delta)
                c = _slice_coeffs(arr, np.array([zi]))
                r, k_ = batched_roots(c)
                if k_[0] != 1:
                    continue
                r = r[0][np.isfinite(r[0])]
                wi = complex(r[np.argmin(np.abs(r - w0))])
                if abs(wi) < 1 - tol:
                    open_cands.append((max(abs(zi), abs(wi)), -1, zi, wi))
                    break

    # open-bidisk scan on a polar grid of z
    g = cfg.disk_grid
    radii = np.arange(g) / g
    angles = 2 * np.pi * np.arange(g) / g
    zs = np.concatenate([[0j], (radii[1:, None] * np.exp(1j * angles)[None, :]).ravel()])
    open_margin = math.inf
    if arr.shape[1] > 1:
        c = _slice_coeffs(arr, zs)
        roots, kind = batched_roots(c)
        tiny = np.max(np.abs(c), axis=1) <= _TRIM * scale
        if tiny.any():
            i = int(np.nonzero(tiny)[0][0])
            open_cands.append((abs(zs[i]), i, complex(zs[i]), 0j))
        mods = np.abs(roots)
        mins = _min_modulus(roots, np.where(tiny, -1, kind))
        open_margin = float(np.min(mins)) - 1.0
        inside = np.nonzero((mods < 1 - tol) & (kind[:, None] == 1))
        if inside[0].size:
            # quantised so float noise cannot reorder exact ties
            depth = np.round(np.maximum(np.abs(zs[inside[0]]), mods[inside]), 9)
            order = np.lexsort((inside[0], depth))[:8]
            for o in order:
                i, k = inside[0][o], inside[1][o]
                open_cands.append((float(depth[o]), int(i), complex(zs[i]), complex(roots[i, k])))
    else:
        open_margin = margin

    if open_cands:
        open_cands.sort(key=lambda t: (t[0], t[1]))
        for _, _, z, w in open_cands[:10]:
            pz, pw, res = _polish(arr, z, w)
            if abs(pz) < 1 and abs(pw) < 1 and res < tol * scale:
                return _open_report(arr, pz, pw, margin, tol, probes, scale, notes,
                                    open_margin=open_margin)
        notes.append("interior zero candidates failed to polish")
        return StabilityReport(Verdict.INCONCLUSIVE, margin, tol, probes,
                               open_margin=open_margin, notes=notes)

    if margin > tol:
        if open_margin <= tol:
            notes.append("interior slice root near the unit circle conflicts with torus margin")
            return StabilityReport(Verdict.INCONCLUSIVE, margin, tol, probes,
                                   open_margin=open_margin, notes=notes)
        return StabilityReport(Verdict.STRONGLY_STABLE, margin, tol, probes,
                               open_margin=open_margin, notes=notes)
    if margin >= -tol or margin == -math.inf:
        wz, ww = boundary if boundary is not None else (None, None)
        wit = None if wz is None else (wz, ww)
        wabs = None if wit is None else abs(_eval(arr, *wit))
        return StabilityReport(Verdict.STABLE_NOT_STRONG, margin, tol, probes, witness=wit,
                               witness_abs=wabs, open_margin=open_margin, notes=notes)
    notes.append("torus root inside the disk but no interior witness found")
    return StabilityReport(Verdict.INCONCLUSIVE, margin, tol, probes,
                           open_margin=open_margin, notes=notes)


def _open_report(arr, z, w, margin, tol, probes, scale, notes, open_margin=-math.inf):
    return StabilityReport(Verdict.ZERO_IN_OPEN_BIDISK, margin, tol, probes,
                           witness=(complex(z), complex(w)),
                           witness_abs=abs(_eval(arr, complex(z), complex(w))),
                           open_margin=open_margin, notes=list(notes))
