"""Acceptance criteria 1-13, one test each.

A summary line per criterion is printed at the end of the pytest run by the
hook in ``conftest.py``.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

import corpus
from helpers import rand_gaussian, rand_poly, rand_univariate
from opa_lab.cli import main as cli_main
from opa_lab.detrep import DetRep, expand, operator_norm
from opa_lab.gaussian import GaussianRational
from opa_lab.innerness import (
    bidegree_complete_index,
    constant_opa_check,
    is_weakly_inner,
    plateau_check,
    pound,
)
from opa_lab.opa import (
    build_optimal_system,
    check_const_equiv,
    det_criterion,
    one_variable_factor_roots,
    orthogonality_residual,
    p0_product_check,
    solve_opa,
)
from opa_lab.poly2 import BiPoly, W, Z, chi_exponents, evaluate, reflect
from opa_lab.scan import read_jsonl
from opa_lab.zeros import Verdict, classify_bidisk, univariate_roots

F = Fraction
criterion = pytest.mark.criterion


@criterion(1, "worked example 1-z-w: p_0, p_1, p_2 and Gram matrices exact, < 1 s")
def test_c01_worked_example():
    t0 = time.perf_counter()
    f = 1 - Z - W
    p = [solve_opa(f, n).poly for n in range(3)]
    g1 = build_optimal_system(f, 1).gram
    g2 = build_optimal_system(f, 2).gram
    elapsed = time.perf_counter() - t0
    assert p[0] == BiPoly.constant(F(1, 3))
    assert p[1] == F(3, 8) + F(1, 8) * Z
    assert p[2] == F(2, 5) + F(1, 10) * Z + F(1, 10) * W
    assert g1 == ((3, -1), (-1, 3))
    assert g2 == ((3, -1, -1), (-1, 3, 1), (-1, 1, 3))
    assert elapsed < 1.0


@criterion(2, "plateaus of 1-zw: 1/2 (n=0..2), 2/3+zw/3 (n=3..11), 3/4+zw/2+(zw)^2/4 (n=12..21), < 30 s")
def test_c02_plateau_example():
    t0 = time.perf_counter()
    f = 1 - Z * W
    zw = Z * W
    expected = {}
    for n in range(0, 3):
        expected[n] = BiPoly.constant(F(1, 2))
    for n in range(3, 12):
        expected[n] = F(2, 3) + F(1, 3) * zw
    for n in range(12, 22):
        expected[n] = F(3, 4) + F(1, 2) * zw + F(1, 4) * zw * zw
    got = {n: solve_opa(f, n).poly for n in range(22)}
    ok = plateau_check([1, -1], 4, 2)
    elapsed = time.perf_counter() - t0
    mismatches = [(n, str(got[n]), str(expected[n])) for n in range(22) if got[n] != expected[n]]
    assert ok
    assert elapsed < 30.0
    assert not mismatches, f"approximants differing from the stated plateaus: {mismatches}"


@criterion(3, "determinantal examples: expand, operator norms 1 and 1/sqrt(2), verdicts")
def test_c03_determinantal_examples():
    half = [[0.5, 0.5], [0.5, 0.5]]
    quarter = [[0.25, 0.25], [0.25, 0.25]]
    p = expand(DetRep(2, half, (1, 1)))
    q = expand(DetRep(4, quarter, (1, 1)))
    for got, want in ((p, 2 - Z - W), (q, 4 - Z - W)):
        keys = set(got.terms) | set(want.terms)
        assert max(abs(complex(got.coeff(*k)) - complex(want.coeff(*k))) for k in keys) < 1e-12
    assert classify_bidisk(p).verdict == Verdict.STABLE_NOT_STRONG
    assert classify_bidisk(q).verdict == Verdict.STRONGLY_STABLE
    assert abs(operator_norm(half) - 1.0) < 1e-10
    assert abs(operator_norm(quarter) - 1 / math.sqrt(2)) < 1e-10, (
        f"operator_norm of the 1/4 matrix is {operator_norm(quarter)!r}"
    )


@criterion(4, "pound values: pound(0,n)=0 for n<=50, pound(1,2)=3, pound(2,2)=5")
def test_c04_pound_values():
    assert all(pound(0, n) == 0 for n in range(51))
    assert pound(1, 2) == 3
    assert pound(2, 2) == 5


@criterion(5, "200 univariate f: roots of p_n (n<=8) have modulus > 1 + 1e-9, < 2 min")
def test_c05_univariate_roots_outside_disk():
    t0 = time.perf_counter()
    rng = random.Random(20240)
    worst = math.inf
    for _ in range(200):
        f = BiPoly.from_univariate(rand_univariate(rng, rng.randint(1, 8), height=9))
        for n in range(9):
            p = solve_opa(f, n, basis=[(k, 0) for k in range(n + 1)]).poly
            coeffs = [complex(p.coeff(k, 0)) for k in range(n + 1)]
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
            if len(coeffs) < 2:
                continue
            worst = min(worst, float(np.min(np.abs(univariate_roots(coeffs)))))
    assert worst > 1 + 1e-9
    assert time.perf_counter() - t0 < 120


@criterion(6, "one-variable factor roots of every computed bivariate OPA exceed 1 + 1e-9")
def test_c06_one_variable_factor_roots():
    checked = 0
    for _, res in corpus.all_bivariate_opas():
        if res.poly.is_zero():
            continue
        roots = one_variable_factor_roots(res.poly)
        for r in roots["z"] + roots["w"]:
            assert abs(r) > 1 + 1e-9
        checked += 1
    assert checked > 300


@criterion(7, "orthogonality residual is exactly zero for every computed OPA")
def test_c07_projection_identity():
    opas = list(corpus.all_bivariate_opas())
    assert len(opas) > 300
    for f, res in opas:
        assert orthogonality_residual(f, res) == 0


@criterion(8, "hound: 50 pairs, constant equals conj((q ft)(0)) / conj((reflect(q) ft)(0))")
def test_c08_hound():
    pairs = corpus.hound_pairs()
    assert len(pairs) == 50
    for q, ft, n, f, g, _, _ in pairs:
        assert reflect(q).coeff(0, 0)
        expected = f.coeff(0, 0).conjugate() / g.coeff(0, 0).conjugate()
        assert check_const_equiv(f, g, n) == expected


@criterion(9, "det-form identity p(a) f(a) detG = conj(f(0)) conj(detG0) on 50 cases")
def test_c09_det_form_identity():
    cases = corpus.det_form_cases()
    assert len(cases) == 50
    for f, n, alpha, res in cases:
        assert n <= 4
        dc = det_criterion(f, n, alpha)
        assert dc.det_gram > 0
        lhs = evaluate(res.poly, *alpha) * evaluate(f, *alpha) * dc.det_gram
        assert lhs == f.coeff(0, 0).conjugate() * dc.det_g0.conjugate()


@criterion(10, "p_0 product law and norm product on 50 separated pairs")
def test_c10_p0_product():
    pairs = corpus.separated_pairs()
    assert len(pairs) == 50
    for g, h in pairs:
        lhs, rhs = p0_product_check(g, h)
        assert lhs == rhs
        assert (g * h).norm2() == g.norm2() * h.norm2()


def _weakly_inner_family():
    rng = random.Random(314)
    family = []
    for i in range(100):
        kind = i % 4
        if kind == 0:
            family.append(BiPoly.constant(rand_gaussian(rng) or GaussianRational(1)))
        elif kind == 1:
            family.append(rand_poly(rng, 2, 2, height=6, complex_=True, nonzero_origin=True))
        elif kind == 2:
            family.append(rand_poly(rng, 2, 2, height=4, density=0.35, nonzero_origin=True))
        else:
            # constant plus one monomial: autocorrelation at that shift is c0 * conj(c1)
            a, b = rng.randint(0, 3), rng.randint(0, 3)
            family.append(BiPoly({(0, 0): rand_gaussian(rng) or 1, (a, b): rand_gaussian(rng)}))
    return family


@criterion(11, "is_weakly_inner agrees with constant_opa_check on 100 polynomials")
def test_c11_weakly_inner_iff_constant_opas():
    family = _weakly_inner_family()
    assert len(family) == 100
    verdicts = []
    for f in family:
        weak = is_weakly_inner(f)
        assert weak == constant_opa_check(f, bidegree_complete_index(f))
        verdicts.append(weak)
    assert any(verdicts) and not all(verdicts)


@criterion(12, "disguise: 30 cases f = h(chi_k), OPA supported on powers of chi_k and strongly stable")
def test_c12_disguise():
    cases = corpus.disguise_cases()
    assert len(cases) == 30
    for h, k, n, f, res in cases:
        a, b = chi_exponents(k)
        for (x, y) in res.poly.terms:
            assert x * b == y * a and (x + y) % (a + b) == 0
        assert classify_bidisk(res.poly).verdict == Verdict.STRONGLY_STABLE


@pytest.mark.slow
@criterion(13, "scan dense11 x1000 seed 7: byte-deterministic, flags re-verified, < 10 min")
def test_c13_scan_integrity(tmp_path, capsys):
    t0 = time.perf_counter()
    outs = []
    for run in range(2):
        path = tmp_path / f"run{run}.jsonl"
        argv = ["scan", "--family", "dense11", "--count", "1000", "--seed", "7", "--nmax", "5",
                "--out", str(path), "--quiet"]
        assert cli_main(argv) == 0
        outs.append(path.read_bytes())
    capsys.readouterr()
    elapsed = time.perf_counter() - t0
    assert outs[0] == outs[1]
    records = read_jsonl(tmp_path / "run0.jsonl")
    assert [r["index"] for r in records] == list(range(1000))
    survivors = []
    for r in records:
        rc = r["recheck"]
        if rc is None:
            assert not r["flags"]["strong_violation"] and not r["flags"]["weak_violation_candidate"]
            continue
        for key in ("strong_violation", "weak_violation_candidate"):
            status = rc[key]["status"]
            if rc["raw_flags"][key]:
                assert status in ("confirmed", "downgraded")
                assert r["flags"][key] == (status == "confirmed")
            else:
                assert status == "not_flagged"
        if r["flags"]["weak_violation_candidate"]:
            survivors.append(r["index"])
    print(f"scan: {len(records)} records, surviving weak candidates: {survivors}, {elapsed:.1f} s")
    assert elapsed < 600
