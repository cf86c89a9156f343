"""Seeded search over polynomial families for approximants that vanish in the bidisk.

Each record is computed from its own generator seeded by ``(seed, index)``,
so runs are reproducible record by record and can resume from any index.
Every raw flag is re-verified: approximants are recomputed exactly and a
floating-point zero is only kept when an exact Gaussian-rational certificate
places a root inside the required region.
"""

from __future__ import annotations

import json
import logging
import math
import re
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator

import numpy as np

from . import linalg
from .detrep import DetRep, expand, sample_strict_contraction
from .gaussian import GaussianRational, format_rational
from .opa import (
    check_const_equiv,
    one_variable_factor_roots,
    orthogonality_residual,
    p0_product_check,
    solve_opa,
    worker_count,
)
from .poly2 import BiPoly, reflect
from .zeros import ClassifyConfig, Verdict, classify_bidisk

__all__ = [
    "ScanConfig",
    "FAMILIES",
    "resolve_family",
    "scan_record",
    "evaluate_candidate",
    "resume_index",
    "run_scan",
    "write_jsonl",
    "read_jsonl",
    "certify_zero",
    "report",
    "format_table",
    "margins_csv",
]

log = logging.getLogger(__name__)

CLOSED_ZERO = {Verdict.ZERO_IN_OPEN_BIDISK.value, Verdict.STABLE_NOT_STRONG.value}
_RATIONAL_BITS = 40


@dataclass(frozen=True)
class ScanConfig:
    height: int = 8
    n_max: int = 5
    classify: ClassifyConfig = field(default_factory=ClassifyConfig)
    recheck_margin: float = 1e-4


# ------------------------------------------------------------------ families

def _rational(rng: np.random.Generator, height: int) -> Fraction:
    return Fraction(int(rng.integers(-height, height + 1)), int(rng.integers(1, height + 1)))


def _dense(rng, height: int, n: int, m: int) -> BiPoly:
    return BiPoly({(a, b): _rational(rng, height) for a in range(n + 1) for b in range(m + 1)})


def _draw_nonvanishing(draw: Callable[[], BiPoly], what: str) -> BiPoly:
    while True:
        f = draw()
        if f.coeff(0, 0):
            return f
        log.info("rejected %s draw vanishing at the origin", what)


def _family_dense(n: int, m: int):
    def gen(seed: int, index: int, cfg: ScanConfig):
        rng = np.random.default_rng([seed, index])
        f = _draw_nonvanishing(lambda: _dense(rng, cfg.height, n, m), f"dense{n}{m}")
        return f, {}
    return gen


def _family_hound(seed: int, index: int, cfg: ScanConfig):
    rng = np.random.default_rng([seed, index // 2])

    def draw_q() -> BiPoly:
        q = _dense(rng, cfg.height, 1, 1)
        return q if q.coeff(0, 0) and q.coeff(1, 1) else BiPoly()

    q = _draw_nonvanishing(draw_q, "hound factor")
    ft = _draw_nonvanishing(lambda: _dense(rng, cfg.height, 1, 1), "hound cofactor")
    member = index % 2
    f = (q if member == 0 else reflect(q)) * ft
    partner = (reflect(q) if member == 0 else q) * ft
    c = check_const_equiv(f, partner, cfg.n_max)
    return f, {
        "pair": index // 2,
        "member": member,
        "const_equiv": None if c is None else c.to_json(),
    }


def _family_separated(seed: int, index: int, cfg: ScanConfig):
    rng = np.random.default_rng([seed, index])

    def uni(var: str) -> BiPoly:
        deg = int(rng.integers(1, 3))
        return BiPoly.from_univariate([_rational(rng, cfg.height) for _ in range(deg + 1)], var)

    g = _draw_nonvanishing(lambda: uni("z"), "separated g")
    h = _draw_nonvanishing(lambda: uni("w"), "separated h")
    lhs, rhs = p0_product_check(g, h)
    return g * h, {"g": g.to_json(), "h": h.to_json(), "p0_product_holds": lhs == rhs}


def _family_detrep(seed: int, index: int, cfg: ScanConfig):
    rng = np.random.default_rng([seed, index])

    def draw() -> BiPoly:
        dim = int(rng.integers(2, 4))
        nz = int(rng.integers(1, dim))
        cap = float(rng.uniform(0.5, 0.95))
        C = sample_strict_contraction(dim, int(rng.integers(2**31)), cap)
        # coarse rationalisation doubles as the perturbation
        return expand(DetRep(1.0, C, (nz, dim - nz)), max_denominator=64)

    return _draw_nonvanishing(draw, "detrep"), {}


FAMILIES = {
    "hound": _family_hound,
    "separated": _family_separated,
    "detrep": _family_detrep,
}


def resolve_family(family_id: str):
    if family_id in FAMILIES:
        return FAMILIES[family_id]
    m = re.fullmatch(r"dense(?:(\d)(\d)|(\d+)x(\d+))", family_id)
    if m:
        n, k = (int(x) for x in (m.group(1, 2) if m.group(1) else m.group(3, 4)))
        return _family_dense(n, k)
    raise ValueError(
        f"unknown family {family_id!r}; expected denseNM, denseNxM, hound, separated or detrep"
    )


# ------------------------------------------------------------- certification

def _rat(x: float) -> Fraction:
    return Fraction(round(x * 2**_RATIONAL_BITS), 2**_RATIONAL_BITS)


def _gauss(z: complex) -> GaussianRational:
    return GaussianRational(_rat(z.real), _rat(z.imag))


def _unit_circle_point(z: complex) -> GaussianRational:
    """Gaussian rational of modulus exactly one near ``z``."""
    theta = math.atan2(z.imag, z.real)
    if abs(abs(theta) - math.pi) < 1e-12:
        return GaussianRational(-1)
    t = _rat(math.tan(theta / 2))
    d = 1 + t * t
    return GaussianRational((1 - t * t) / d, 2 * t / d)


def _sqrt_upper(q: Fraction) -> Fraction:
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    s = _rat(math.sqrt(float(q))) + Fraction(1, 2**_RATIONAL_BITS)
    while s * s < q:
        s += Fraction(1, 2**_RATIONAL_BITS)
    return s


def _slice_exact(p: BiPoly, fixed: GaussianRational, fixed_var: str) -> list[GaussianRational]:
    terms = p.terms
    if fixed_var == "z":
        deg = max(b for _, b in terms)
        out = [GaussianRational(0)] * (deg + 1)
        for (a, b), c in terms.items():
            out[b] = out[b] + c * fixed ** a
    else:
        deg = max(a for a, _ in terms)
        out = [GaussianRational(0)] * (deg + 1)
        for (a, b), c in terms.items():
            out[a] = out[a] + c * fixed ** b
    return linalg.poly_trim(out)


def certify_zero(p: BiPoly, z: complex, w: complex, closed: bool = False) -> dict:
    """Exact certificate that ``p`` vanishes in the open (or closed) bidisk near ``(z, w)``.

    One coordinate is fixed at a nearby Gaussian-rational point inside the
    (closed) disk. For the remaining univariate ``g`` of degree ``m``, some
    root lies within ``m |g(x)| / |g'(x)|`` of any ``x``; the certificate holds
    when that disk provably sits inside the (closed) unit disk.
    """
    attempts = []
    for fixed_var, fixed_val, free_val in (("z", z, w), ("w", w, z)):
        if closed and abs(abs(fixed_val) - 1) < 1e-6:
            fq = _unit_circle_point(fixed_val)
        else:
            fq = _gauss(fixed_val)
        if fq.abs2() > 1 or (not closed and fq.abs2() == 1):
            attempts.append({"fixed": fixed_var, "reason": "fixed point outside disk"})
            continue
        g = _slice_exact(p, fq, fixed_var)
        if len(g) < 2:
            attempts.append({"fixed": fixed_var, "reason": "slice has no roots"})
            continue
        xq = _gauss(free_val)
        gv = linalg.poly_eval(g, xq)
        gd = linalg.poly_eval(linalg.poly_derivative(g), xq)
        if not gd:
            attempts.append({"fixed": fixed_var, "reason": "derivative vanishes"})
            continue
        m = len(g) - 1
        rho2 = m * m * gv.abs2() / gd.abs2()
        s = _sqrt_upper(xq.abs2())
        t = _sqrt_upper(rho2)
        ok = s + t < 1 if not closed else s + t <= 1
        point = (fq, xq) if fixed_var == "z" else (xq, fq)
        cert = {
            "fixed": fixed_var,
            "point": [v.to_json() for v in point],
            "abs2_value": format_rational(p(*point).abs2()),
            "root_radius_sq": format_rational(rho2),
            "modulus_upper": format_rational(s),
            "certified": bool(ok),
        }
        if ok:
            return cert
        attempts.append(cert)
    return {"certified": False, "attempts": attempts}


# ------------------------------------------------------------------- records

def _fingerprint(report) -> dict:
    return {"verdict": report.verdict.value, "margin": _num(report.margin)}


def _num(x: float):
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def scan_record(family_id: str, seed: int, index: int, cfg: ScanConfig = ScanConfig()) -> dict:
    gen = resolve_family(family_id)
    f, extras = gen(seed, index, cfg)
    return evaluate_candidate(f, cfg, family_id=family_id, seed=seed, index=index, extras=extras)


def evaluate_candidate(
    f: BiPoly,
    cfg: ScanConfig = ScanConfig(),
    family_id: str = "explicit",
    seed: int = 0,
    index: int = 0,
    extras: dict | None = None,
) -> dict:
    """Full record for one ``f``: approximants, zero classes, flags and recheck."""
    if not f.coeff(0, 0):
        raise ValueError("f must not vanish at the origin")
    f_rep = classify_bidisk(f, cfg.classify)
    opa_rows = []
    reports = {}
    for n in range(cfg.n_max + 1):
        res = solve_opa(f, n)
        rep = classify_bidisk(res.poly, cfg.classify)
        reports[n] = (res, rep)
        roots = one_variable_factor_roots(res.poly)
        opa_rows.append({
            "n": n,
            "poly": res.poly.to_json(),
            "error_sq": format_rational(res.error_sq),
            "residual_zero": orthogonality_residual(f, res) == 0,
            "opa_class": rep.verdict.value,
            "margin": _num(rep.margin),
            "one_variable_factor_root_moduli": {k: sorted(abs(r) for r in v) for k, v in roots.items()},
        })
    strong_raw = any(r["opa_class"] in CLOSED_ZERO for r in opa_rows)
    weak_raw = f_rep.verdict is Verdict.STRONGLY_STABLE and any(
        r["opa_class"] == Verdict.ZERO_IN_OPEN_BIDISK.value for r in opa_rows
    )
    record = {
        "family_id": family_id,
        "seed": seed,
        "index": index,
        "f": f.to_json(),
        "f_class": f_rep.verdict.value,
        "f_margin": _num(f_rep.margin),
        "opa_results": opa_rows,
        "flags": {"strong_violation": strong_raw, "weak_violation_candidate": weak_raw},
        "recheck": None,
        "extras": extras or {},
    }
    if strong_raw or weak_raw:
        record["recheck"] = _recheck(f, f_rep, reports, opa_rows, record["flags"], cfg)
    return record


def _recheck(f, f_rep, reports, opa_rows, flags, cfg: ScanConfig) -> dict:
    out: dict = {"raw_flags": dict(flags)}
    out["opa_recomputed_equal"] = all(
        solve_opa(f, n).poly == res.poly for n, (res, _) in reports.items()
    )
    certified_open: list[int] = []
    certified_closed: list[int] = []
    certificates = {}
    for row in opa_rows:
        n = row["n"]
        if row["opa_class"] not in CLOSED_ZERO:
            continue
        res, rep = reports[n]
        wit = rep.witness
        cert = {"certified": False, "reason": "no witness"}
        if wit is not None and out["opa_recomputed_equal"]:
            is_open = rep.verdict is Verdict.ZERO_IN_OPEN_BIDISK
            cert = certify_zero(res.poly, wit[0], wit[1], closed=not is_open)
            if cert["certified"]:
                (certified_open if is_open else certified_closed).append(n)
        certificates[str(n)] = cert
        if not cert["certified"]:
            row["float_class"] = row["opa_class"]
            row["opa_class"] = Verdict.INCONCLUSIVE.value
    out["certificates"] = certificates
    strong_ok = bool(certified_open or certified_closed)
    out["strong_violation"] = {
        "status": "confirmed" if strong_ok else ("downgraded" if flags["strong_violation"] else "not_flagged"),
        "certified_n": sorted(certified_open + certified_closed),
    }
    flags["strong_violation"] = strong_ok
    if flags["weak_violation_candidate"]:
        fine = ClassifyConfig(
            torus_samples=cfg.classify.torus_samples * 4,
            disk_grid=cfg.classify.disk_grid * 2,
            tolerance=cfg.classify.tolerance,
            refine_iters=cfg.classify.refine_iters,
        )
        f_fine = classify_bidisk(f, fine)
        f_ok = f_fine.verdict is Verdict.STRONGLY_STABLE and f_fine.margin > cfg.recheck_margin
        weak_ok = f_ok and bool(certified_open)
        out["weak_violation_candidate"] = {
            "status": "confirmed" if weak_ok else "downgraded",
            "f_recheck": _fingerprint(f_fine),
            "certified_open_n": certified_open,
        }
        flags["weak_violation_candidate"] = weak_ok
        if weak_ok:
            log.warning("weak Shanks candidate survived exact recheck: %s", BiPoly.from_json(f.to_json()))
    else:
        out["weak_violation_candidate"] = {"status": "not_flagged"}
    return out


def _record_job(args) -> str:
    family_id, seed, index, cfg = args
    return _dumps(scan_record(family_id, seed, index, cfg))


def _dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def run_scan(
    family_id: str,
    n_max: int = 5,
    count: int = 100,
    seed: int = 0,
    config: ScanConfig | None = None,
    start: int = 0,
    workers: int | None = None,
) -> Iterator[str]:
    """Yield serialised records for indices ``start..count-1`` in index order."""
    resolve_family(family_id)
    cfg = config or ScanConfig()
    if cfg.n_max != n_max:
        cfg = ScanConfig(cfg.height, n_max, cfg.classify, cfg.recheck_margin)
    jobs = [(family_id, seed, i, cfg) for i in range(start, count)]
    workers = worker_count(workers)
    if workers == 1 or len(jobs) < 2:
        for job in jobs:
            yield _record_job(job)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves input order, which is the deterministic merge
        yield from pool.map(_record_job, jobs, chunksize=8)


def write_jsonl(path, lines: Iterable[str], append: bool = False) -> int:
    n = 0
    with open(path, "a" if append else "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")
            fh.flush()
            n += 1
    return n


def read_jsonl(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def resume_index(path, family_id: str, seed: int) -> int:
    """Next index to compute given an existing (possibly truncated) JSONL file."""
    try:
        records = read_jsonl(path)
    except FileNotFoundError:
        return 0
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path} has a corrupt line; truncate it before resuming") from exc
    for r in records:
        if r["family_id"] != family_id or r["seed"] != seed:
            raise ValueError("existing output was produced by a different family or seed")
    idx = [r["index"] for r in records]
    if idx != list(range(len(idx))):
        raise ValueError("existing output is not a contiguous prefix of indices")
    return len(idx)


# ------------------------------------------------------------------- summary

def report(records: Iterable[dict]) -> dict:
    """Counts per family of verdicts, flags and recheck outcomes."""
    fams: dict[str, dict] = {}
    pairs: dict[tuple[str, int, int], dict[int, dict]] = defaultdict(dict)
    for r in records:
        fam = fams.setdefault(r["family_id"], {
            "records": 0,
            "f_class": Counter(),
            "opa_class": Counter(),
            "strong_violation": 0,
            "weak_violation_candidate": 0,
            "raw_strong": 0,
            "raw_weak": 0,
            "downgraded": 0,
            "weak_candidates": [],
        })
        fam["records"] += 1
        fam["f_class"][r["f_class"]] += 1
        for row in r["opa_results"]:
            fam["opa_class"][row["opa_class"]] += 1
        fam["strong_violation"] += bool(r["flags"]["strong_violation"])
        if r["flags"]["weak_violation_candidate"]:
            fam["weak_violation_candidate"] += 1
            # survivors of the exact recheck are research output, listed individually
            fam["weak_candidates"].append({"index": r["index"], "seed": r["seed"], "f": r["f"]})
        rc = r.get("recheck")
        if rc:
            fam["raw_strong"] += bool(rc["raw_flags"]["strong_violation"])
            fam["raw_weak"] += bool(rc["raw_flags"]["weak_violation_candidate"])
            fam["downgraded"] += sum(
                rc[k]["status"] == "downgraded" for k in ("strong_violation", "weak_violation_candidate")
            )
        ex = r.get("extras") or {}
        if "pair" in ex:
            pairs[(r["family_id"], r["seed"], ex["pair"])][ex["member"]] = r
    for fam in fams.values():
        fam["f_class"] = dict(sorted(fam["f_class"].items()))
        fam["opa_class"] = dict(sorted(fam["opa_class"].items()))
    agree: dict[str, list[bool]] = defaultdict(list)
    for (fid, _, _), members in pairs.items():
        if len(members) == 2:
            a, b = members[0], members[1]
            same = (
                [x["opa_class"] for x in a["opa_results"]] == [x["opa_class"] for x in b["opa_results"]]
                and a["flags"]["strong_violation"] == b["flags"]["strong_violation"]
                and a["extras"].get("const_equiv") is not None
            )
            agree[fid].append(same)
    for fid, vals in agree.items():
        fams[fid]["pairs"] = len(vals)
        fams[fid]["pairwise_agreement"] = sum(vals) / len(vals)
    return {"families": dict(sorted(fams.items())), "total_records": sum(f["records"] for f in fams.values())}


def format_table(summary: dict) -> str:
    cols = ["family", "records", "StronglyStable f", "strong", "weak", "downgraded", "pair agree"]
    rows = []
    for fid, fam in summary["families"].items():
        pa = fam.get("pairwise_agreement")
        rows.append([
            fid,
            str(fam["records"]),
            str(fam["f_class"].get(Verdict.STRONGLY_STABLE.value, 0)),
            str(fam["strong_violation"]),
            str(fam["weak_violation_candidate"]),
            str(fam["downgraded"]),
            "-" if pa is None else f"{100 * pa:.0f}%",
        ])
    if not rows:
        rows.append(["(none)", "0", "0", "0", "0", "0", "-"])
    widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
    line = lambda vals: "  ".join(v.ljust(w) for v, w in zip(vals, widths))  # noqa: E731
    return "\n".join([line(cols), line(["-" * w for w in widths])] + [line(r) for r in rows])


def margins_csv(records: Iterable[dict]) -> str:
    out = ["family_id,index,kind,n,verdict,margin"]
    for r in records:
        out.append(f"{r['family_id']},{r['index']},f,,{r['f_class']},{r['f_margin']}")
        for row in r["opa_results"]:
            out.append(f"{r['family_id']},{r['index']},opa,{row['n']},{row['opa_class']},{row['margin']}")
    return "\n".join(out) + "\n"
