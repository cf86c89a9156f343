"""Command-line entry point: ``opa-lab <subcommand> ...``.

Results go to stdout as JSON (or to ``--out``); logs go to stderr. Exit
status is 0 on success, 1 on a domain error (for example ``f(0) = 0`` where
that is forbidden) and 2 on a usage error (bad flags, unreadable input).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .detrep import DetRep, expand, load_matrix, operator_norm
from .gaussian import GaussianRational, format_rational, parse_rational
from .innerness import is_inner, plateau_check, plateau_values, weak_inner_failure
from .opa import det_criterion, orthogonality_residual, solve_opa
from .poly2 import BiPoly, reflect
from .scan import (
    ScanConfig,
    format_table,
    margins_csv,
    read_jsonl,
    report,
    resolve_family,
    resume_index,
    run_scan,
    write_jsonl,
)
from .zeros import ClassifyConfig, classify_bidisk

log = logging.getLogger("opa_lab")


class UsageError(Exception):
    pass


def _read_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _read_poly(path: str) -> BiPoly:
    obj = _read_json(path)
    try:
        return BiPoly.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path} is not a polynomial: {exc}") from exc


def _parse_alpha(text: str) -> tuple[GaussianRational, GaussianRational]:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("--alpha expects re1,im1,re2,im2 as p/q rationals")
    try:
        r1, i1, r2, i2 = (parse_rational(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --alpha: {exc}") from exc
    return GaussianRational(r1, i1), GaussianRational(r2, i2)


def _parse_split(text: str) -> tuple[int, int]:
    try:
        nz, nw = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError("--split expects nz,nw") from exc
    return nz, nw


def _classify_config(args) -> ClassifyConfig:
    defaults = ClassifyConfig()
    return ClassifyConfig(
        torus_samples=getattr(args, "torus_samples", None) or defaults.torus_samples,
        disk_grid=getattr(args, "disk_grid", None) or defaults.disk_grid,
        tolerance=args.tolerance if args.tolerance is not None else defaults.tolerance,
        refine_iters=getattr(args, "refine_iters", None)
        if getattr(args, "refine_iters", None) is not None
        else defaults.refine_iters,
    )


# ---------------------------------------------------------------- commands

def cmd_opa(args) -> dict:
    f = _read_poly(args.input)
    res = solve_opa(f, args.degree)
    out = {
        "degree": args.degree,
        "poly": res.poly.to_json(),
        "error_sq": format_rational(res.error_sq),
        "residual": format_rational(orthogonality_residual(f, res)),
    }
    if args.alpha:
        alpha = _parse_alpha(args.alpha)
        dc = det_criterion(f, args.degree, alpha)
        out["det_criterion"] = {
            "alpha": [a.to_json() for a in alpha],
            "det_gram": format_rational(dc.det_gram),
            "det_g0": dc.det_g0.to_json(),
            "opa_vanishes": not dc.det_g0,
        }
    return out


def cmd_classify(args) -> dict:
    return classify_bidisk(_read_poly(args.input), _classify_config(args)).to_json()


def cmd_reflect(args) -> dict:
    return reflect(_read_poly(args.input)).to_json()


def cmd_inner(args) -> dict:
    f = _read_poly(args.input)
    fail = weak_inner_failure(f)
    return {
        "weakly_inner": fail is None,
        "failing_shift": None if fail is None else list(fail),
        "inner": is_inner(f),
    }


def cmd_plateau(args) -> dict:
    h = _read_poly(args.h)
    if any(b for _, b in h.terms):
        raise UsageError("h must be a polynomial in z alone")
    return {
        "chi": args.chi,
        "jmax": args.jmax,
        "ok": plateau_check(h, args.chi, args.jmax),
        "plateaus": [p.to_json() for p in plateau_values(h, args.chi, args.jmax)],
    }


def cmd_detrep(args) -> dict:
    try:
        C = load_matrix(_read_json(args.matrix))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{args.matrix}: {exc}") from exc
    try:
        alpha = complex(args.alpha) if "/" not in args.alpha else float(parse_rational(args.alpha))
    except ValueError as exc:
        raise UsageError(f"bad --alpha: {exc}") from exc
    rep = DetRep(alpha, C, _parse_split(args.split))
    log.info("operator norm of C: %.12g", operator_norm(C))
    out = expand(rep).to_json()
    out["operator_norm"] = operator_norm(C)
    return out


def cmd_scan(args) -> dict:
    resolve_family(args.family)
    cfg = ScanConfig(height=args.height, n_max=args.nmax, classify=_classify_config(args))
    out_path = args.out or "scan.jsonl"
    start = resume_index(out_path, args.family, args.seed) if args.resume else 0
    if start:
        log.info("resuming %s at index %d", out_path, start)
    lines = run_scan(args.family, args.nmax, args.count, args.seed, cfg, start=start, workers=args.workers)
    written = write_jsonl(out_path, lines, append=bool(start))
    summary = report(read_jsonl(out_path))
    log.info("\n%s", format_table(summary))
    return {"out": out_path, "written": written, "start": start, "summary": summary}


def cmd_report(args) -> dict:
    try:
        records = read_jsonl(args.infile)
    except OSError as exc:
        raise UsageError(f"cannot read {args.infile}: {exc.strerror or exc}") from exc
    summary = report(records)
    log.info("\n%s", format_table(summary))
    if args.csv:
        Path(args.csv).write_text(margins_csv(records), encoding="utf-8")
    return summary


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=None,
                        help="zero-location tolerance (default 1e-7)")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--out", default=None,
                        help="write the JSON result here instead of stdout (scan: JSONL path)")
    common.add_argument("--quiet", action="store_true", help="suppress log output on stderr")

    parser = argparse.ArgumentParser(prog="opa-lab", description=__doc__.splitlines()[0],
                                     parents=[common])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("opa", parents=[common], help="optimal polynomial approximant")
    p.add_argument("--input", required=True, help="polynomial JSON for f")
    p.add_argument("--degree", type=int, required=True, help="approximant index n")
    p.add_argument("--alpha", help="point re1,im1,re2,im2 in the open bidisk for the determinant test")
    p.set_defaults(func=cmd_opa)

    def classify_flags(p):
        p.add_argument("--torus-samples", type=int, default=None, help="default 2048")
        p.add_argument("--disk-grid", type=int, default=None, help="default 128")
        p.add_argument("--refine-iters", type=int, default=None, help="default 40")

    p = sub.add_parser("classify", parents=[common], help="zero location relative to the bidisk")
    p.add_argument("--input", required=True)
    classify_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reflect", parents=[common], help="reflection of a polynomial")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_reflect)

    p = sub.add_parser("inner", parents=[common], help="weak innerness test")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_inner)

    p = sub.add_parser("plateau", parents=[common], help="plateaus of approximants of h(chi_k)")
    p.add_argument("--h", required=True, help="polynomial JSON for h (in z only)")
    p.add_argument("--chi", type=int, required=True, help="index k of the base monomial")
    p.add_argument("--jmax", type=int, required=True, help="last plateau index")
    p.set_defaults(func=cmd_plateau)

    p = sub.add_parser("detrep", parents=[common], help="expand alpha*det(I - C D)")
    p.add_argument("--matrix", required=True, help="row-major JSON of [re, im] pairs")
    p.add_argument("--split", required=True, help="nz,nw block sizes of D")
    p.add_argument("--alpha", default="1", help="scalar prefactor (default 1)")
    p.set_defaults(func=cmd_detrep)

    p = sub.add_parser("scan", parents=[common], help="seeded search for Shanks-type violations")
    p.add_argument("--family", required=True, help="denseNM, denseNxM, hound, separated or detrep")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--nmax", type=int, default=5, help="largest approximant index (default 5)")
    p.add_argument("--height", type=int, default=8, help="coefficient height bound (default 8)")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: CPU count, capped by OPA_LAB_THREADS)")
    p.add_argument("--resume", action="store_true", help="continue an existing --out file")
    classify_flags(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("report", parents=[common], help="summarise a scan JSONL file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--csv", default=None, help="write margin distribution CSV here")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.CRITICAL + 1 if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        result = args.func(args)
    except UsageError as exc:
        log.error("%s", exc)
        return 2
    except (ValueError, ArithmeticError) as exc:
        log.error("%s", exc)
        return 1
    text = json.dumps(result, sort_keys=True, indent=2)
    if args.out and args.command != "scan":
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
