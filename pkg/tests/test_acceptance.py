"""Acceptance criteria, one test each.

Every test prints a ``CRITERION <i> PASS|FAIL: ...`` line to the terminal
before asserting, so the outcome is visible even under ``pytest -q``.
"""

import itertools
import time

import numpy as np
import pytest

from gmrelax import kernels
from gmrelax import sweep as sw
from gmrelax.birkhoff import relaxed_gradient, relaxed_objective
from gmrelax.cli import main
from gmrelax.corpus import NAMES, corpus
from gmrelax.equivalence import NON_UNIQUE, UNIQUE, MatchConfig, certify_uniqueness_general, relax_and_round
from gmrelax.graph import Permutation, apply_permutation
from gmrelax.report import corpus_summary, dumps, verify_corpus
from oracles import assignment_bruteforce, finite_difference_gradient, labeled_graphs, unlabeled_graphs

SWEEP_N, SWEEP_COUNT, SWEEP_SEED = 8, 10_000, 42


@pytest.fixture
def announce(capsys):
    def emit(i, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {i} {'PASS' if ok else 'FAIL'}: {detail}")

    return emit


@pytest.fixture(scope="module")
def big_sweep():
    cfg = sw.SweepConfig(p=0.5, seed=SWEEP_SEED)
    t0 = time.perf_counter()
    records = sw.run_sweep([SWEEP_N], SWEEP_COUNT, cfg, workers=1)
    return records, time.perf_counter() - t0


def test_criterion_1_corpus_fidelity(announce, capsys):
    t0 = time.perf_counter()
    code = main(["corpus-verify"])
    elapsed = time.perf_counter() - t0
    out = capsys.readouterr().out
    ok = code == 0 and out.strip().endswith("7/7 entries pass") and elapsed < 5
    announce(1, ok, f"corpus-verify exit {code}, {out.strip().splitlines()[-1]}, {elapsed:.2f} s")
    assert ok, out


@pytest.mark.slow
def test_criterion_2_theorem_soundness_sweep(big_sweep, announce):
    records, elapsed = big_sweep
    s = sw.summarize(records)
    a = s["anomalies"]
    theorem_parts = {k: a[k] for k in (sw.SOUNDNESS, sw.PROPOSITION, sw.INVOLUTION)}
    counterexamples = a[sw.CONJECTURE]
    ok = not any(theorem_parts.values()) and counterexamples == 0 and elapsed < 600
    announce(
        2,
        ok,
        f"{s['graphs']} graphs in {elapsed:.0f} s single-threaded; "
        + ", ".join(f"{k}={v}" for k, v in theorem_parts.items())
        + f", {sw.CONJECTURE}={counterexamples}; 8-worker timing not measurable on this host",
    )
    # the theorem checks and the runtime bound are asserted separately from the conjecture count
    assert not any(theorem_parts.values()), theorem_parts
    assert s["defect_free"], a
    assert elapsed < 600
    assert counterexamples == 0, f"{counterexamples} graphs show the conjectured pattern with a trivial group"


@pytest.mark.slow
def test_criterion_3_certificate_agreement(big_sweep, announce):
    records, _ = big_sweep
    bad = []
    checked = 0
    for r in records:
        if r.simple:
            checked += 1
            if r.verdict == "disagree" or abs(r.fast_optimum - r.general_optimum) > 1e-6:
                bad.append(r.index)
    for res in verify_corpus():
        certs = res.report.certificates
        if res.report.classification["simple_spectrum"]:
            checked += 1
            f, g = certs["fast_path"], certs["general_lp"]
            if f["verdict"] != g["verdict"] or abs(f["lp_optimum"] - g["lp_optimum"]) > 1e-6:
                bad.append(res.name)
    announce(3, not bad, f"{checked} simple-spectrum graphs, {len(bad)} disagreements")
    assert not bad


def _oracle_contradictions(adjs):
    bad = 0
    for a in adjs:
        verdict = certify_uniqueness_general(a.astype(float)).verdict
        sols = sw._permutation_solutions(a)
        if (verdict == UNIQUE and sols != 1) or (sols >= 2 and verdict != NON_UNIQUE):
            bad += 1
    return bad


@pytest.mark.slow
def test_criterion_4_bruteforce_oracle(announce):
    rng = np.random.default_rng(4)
    n4 = list(labeled_graphs(4))
    all5 = list(labeled_graphs(5))
    n5 = [all5[i] for i in rng.choice(len(all5), size=500, replace=False)]
    n7 = unlabeled_graphs(7)
    bad = {"n4_labeled": _oracle_contradictions(n4), "n5_sample": _oracle_contradictions(n5), "n7_unlabeled": _oracle_contradictions(n7)}
    sizes = (len(n4), len(n5), len(n7))
    ok = not any(bad.values()) and sizes == (64, 500, 1044)
    announce(4, ok, f"graphs checked {sizes} (n=4 labeled, n=5 sample, n=7 unlabeled); contradictions {bad}")
    assert sizes == (64, 500, 1044)
    assert not any(bad.values()), bad


def test_criterion_5_planted_permutation_recovery(announce):
    g = corpus("fig3").graph
    rng = np.random.default_rng(5)
    cfg = MatchConfig(fw_tol=1e-9, fw_max_iter=50_000, run_exact=False)
    recovered, worst_gap, worst_iter = 0, 0.0, 0
    for _ in range(100):
        sigma = Permutation.random(7, rng)
        rep = relax_and_round(g, apply_permutation(g, sigma), cfg)
        recovered += rep.rounded == sigma
        worst_gap = max(worst_gap, rep.relaxed.dual_gap)
        worst_iter = max(worst_iter, rep.relaxed.iterations)
    ok = recovered == 100 and worst_gap <= 1e-9 and worst_iter <= 50_000
    announce(5, ok, f"recovered {recovered}/100, worst gap {worst_gap:.2e}, worst iterations {worst_iter}")
    assert ok


def test_criterion_6_regular_counterexample(announce):
    a = corpus("frucht").graph.matrix()
    n = a.shape[0]
    j = np.full((n, n), 1.0 / n)
    comm = np.linalg.norm(a @ j - j @ a)
    cert = certify_uniqueness_general(a)
    ok = comm <= 1e-12 and cert.lp_optimum >= 11 - 1e-6
    announce(6, ok, f"||AJ - JA||_F = {comm:.1e}, general optimum {cert.lp_optimum:.9f}")
    assert ok


def test_criterion_7_numerical_kernels(announce):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 31))
        x = rng.normal(size=(n, n))
        a = x + x.T
        w, v, sweeps, _ = kernels.jacobi_eigh(a)
        worst = max(worst, np.linalg.norm(v @ np.diag(w) @ v.T - a) / np.linalg.norm(a))
    hung_bad = 0
    for _ in range(1000):
        c = rng.normal(size=(6, 6))
        assign = kernels.hungarian(c)
        hung_bad += abs(c[np.arange(6), assign].sum() - assignment_bruteforce(c)) > 1e-9
    grad_worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 8))
        a, b = (rng.integers(0, 2, size=(n, n)) for _ in range(2))
        a, b = np.triu(a, 1) + np.triu(a, 1).T, np.triu(b, 1) + np.triu(b, 1).T
        q = rng.random((n, n))
        exact = relaxed_gradient(a, b, q)
        fd = finite_difference_gradient(lambda m: relaxed_objective(a, b, m), q)
        grad_worst = max(grad_worst, np.linalg.norm(exact - fd) / max(np.linalg.norm(exact), 1e-12))
    ok = worst <= 1e-9 and hung_bad == 0 and grad_worst <= 1e-4
    announce(
        7,
        ok,
        f"backend {kernels.BACKEND}: Jacobi worst residual {worst:.1e}*||A||_F, "
        f"Hungarian mismatches {hung_bad}/1000, gradient worst relative error {grad_worst:.1e}",
    )
    assert ok


@pytest.mark.slow
def test_criterion_8_determinism(big_sweep, announce):
    corpus_runs = [dumps(corpus_summary(verify_corpus())) for _ in range(2)]
    reports = [[r.report.to_json() for r in verify_corpus()] for _ in range(2)]
    records, _ = big_sweep
    cfg = sw.SweepConfig(p=0.5, seed=SWEEP_SEED)
    rerun = sw.run_sweep([SWEEP_N], SWEEP_COUNT, cfg, workers=2)
    same_corpus = corpus_runs[0] == corpus_runs[1] and reports[0] == reports[1]
    same_sweep = sw.records_to_csv(records) == sw.records_to_csv(rerun)
    same_summary = dumps(sw.summarize(records)) == dumps(sw.summarize(rerun))
    ok = same_corpus and same_sweep and same_summary
    announce(8, ok, f"corpus reports identical: {same_corpus}; sweep CSV identical across 1 and 2 workers: {same_sweep}")
    assert ok
