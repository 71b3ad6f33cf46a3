"""Acceptance criteria 1-10, each at its stated tolerance and time budget.

Every test records a single ``criterion k: PASS|FAIL ...`` line, printed in the
terminal summary (see conftest.py) as well as to stdout.
"""
import math
import time

import numpy as np
import pytest

from conftest import VERDICTS
from grunskylab.bounds import chain_slacks, maximize
from grunskylab.cli import main
from grunskylab.coefficients import (
    TestVector,
    log_coefficients,
    odd_grunsky,
    omega33_residual,
    omega_bounds,
    quadratic_form_slack,
    verify_eq7,
    verify_gamma_omega,
)
from grunskylab.scan import CorpusSpec, build_corpus, random_test_vectors, scan, summarize
from grunskylab.series import Series, ser_exp, ser_log, ser_mul, ser_sqrt
from grunskylab.zoo import FamilySpec, realize

ORDER16 = CorpusSpec().replace(order=16, n_max=4)


def verdict(k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} {detail}"
    VERDICTS.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def corpus16():
    specs = build_corpus(ORDER16)
    assert len(specs) >= 50
    return [realize(fs, 16) for fs in specs]


def test_criterion_1_koebe_log_coefficients():
    t0 = time.perf_counter()
    lc = log_coefficients(realize(FamilySpec("koebe"), 13), 12)
    err = max(abs(lc[n] - 1 / n) for n in range(1, 13))
    dt = time.perf_counter() - t0
    verdict(1, err < 1e-12 and dt < 1, f"max |gamma_n - 1/n| = {err:.3g}, {dt:.3f} s")


def test_criterion_2_coefficient_relations():
    t0 = time.perf_counter()
    corpus = [realize(fs, 16) for fs in build_corpus(ORDER16)]
    worst = max(verify_eq7(f, 1e-9).max_residual for f in corpus)
    dt = time.perf_counter() - t0
    ok = len(corpus) >= 50 and worst <= 1e-9 and dt < 30
    verdict(2, ok, f"{len(corpus)} functions, max residual {worst:.3g}, {dt:.2f} s")


def test_criterion_3_gamma_omega_identities(corpus16):
    worst = max(verify_gamma_omega(f, 1e-9).max_residual for f in corpus16)
    verdict(3, worst <= 1e-9, f"{len(corpus16)} functions, max residual {worst:.3g}")


def test_criterion_4_grunsky_inequality(corpus16):
    rng = np.random.default_rng(ORDER16.seed)
    vectors = random_test_vectors(rng, 100, support=(1, 3, 5, 7))
    worst = min(quadratic_form_slack(odd_grunsky(f), x)[2] for f in corpus16 for x in vectors)
    koebe = quadratic_form_slack(odd_grunsky(realize(FamilySpec("koebe"), 16)), TestVector({1: 1.0}))[2]
    ok = worst >= -1e-9 and abs(koebe) <= 1e-10
    verdict(4, ok, f"min slack {worst:.3g} over 100 vectors; Koebe extremal slack {koebe:.3g}")


@pytest.mark.parametrize("name,value", [("phi", 0.4472135955), ("psi", 0.3779644730)])
def test_criterion_5_maximizer(name, value):
    t0 = time.perf_counter()
    r = maximize(name)
    dt = time.perf_counter() - t0
    dist = math.hypot(*r.argmax)
    ok = abs(r.value - value) <= 1e-6 and dist <= 1e-3 and dt < 5
    verdict(5, ok, f"{name}: max {r.value!r} at {r.argmax}, {dt:.2f} s")


def test_criterion_6_theorem_guard():
    spec = CorpusSpec()
    res = scan(build_corpus(spec), spec.n_max, spec.order)
    s = summarize(res.records)
    d3, d4 = s[3]["max_d_n"], s[4]["max_d_n"]
    ok = not res.skipped and d3 <= 1 / math.sqrt(5) + 1e-9 and d4 <= 1 / math.sqrt(7) + 1e-9
    verdict(6, ok, f"max d3 = {d3!r} ({s[3]['argmax']}), max d4 = {d4!r} ({s[4]['argmax']})")


def test_criterion_7_chain_audit(corpus16):
    reports = [chain_slacks(f) for f in corpus16]
    worst = min(r.min_slack for r in reports)
    eq = max(r.equality_residuals[1] for r in reports)
    verdict(7, worst >= -1e-9 and eq <= 1e-10, f"min step slack {worst:.3g}, chain-2 equality residual {eq:.3g}")


def test_criterion_8_omega_bounds(corpus16):
    tables = [odd_grunsky(f) for f in corpus16]
    worst = min(min(omega_bounds(t).values()) for t in tables)
    res = max(omega33_residual(t) for t in tables)
    verdict(8, worst >= -1e-9 and res <= 1e-9, f"min bound slack {worst:.3g}, omega33 residual {res:.3g}")


def test_criterion_9_engine_round_trips():
    # unit constant term, the remaining 24 coefficients uniform in the complex disk of radius 2
    rng = np.random.default_rng(9)
    worst_exp = worst_sqrt = 0.0
    for _ in range(1000):
        tail = 2 * np.sqrt(rng.uniform(size=24)) * np.exp(2j * np.pi * rng.uniform(size=24))
        a = Series(np.concatenate(([1.0], tail)))
        worst_exp = max(worst_exp, np.max(np.abs(ser_exp(ser_log(a)).coeffs - a.coeffs)))
        s = ser_sqrt(a)
        worst_sqrt = max(worst_sqrt, np.max(np.abs(ser_mul(s, s).coeffs - a.coeffs)))
    ok = worst_exp <= 1e-12 and worst_sqrt <= 1e-12
    verdict(9, ok, f"max exp(log a) error {worst_exp:.3g}, max sqrt(a)^2 error {worst_sqrt:.3g}")


def test_criterion_10_scan_determinism(tmp_path):
    import pathlib

    cfg = pathlib.Path(__file__).resolve().parents[1] / "configs" / "corpus.json"
    outs = []
    for k in range(2):
        path = tmp_path / f"scan{k}.csv"
        assert main(["scan", "--config", str(cfg), "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    verdict(10, outs[0] == outs[1], f"two runs, {len(outs[0])} bytes each, identical={outs[0] == outs[1]}")
