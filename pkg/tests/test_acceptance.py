"""Acceptance criteria, one test each, every comparison exact.

Each test prints a single ``[acceptance] N PASS|FAIL ...`` line to the
terminal (outside pytest's capture) so the run log records every criterion.
Run standalone with ``python tests/test_acceptance.py``.
"""

import json
import resource
import subprocess
import sys
import time
from math import comb

import pytest

from conftest import CORPUS
from leibhom.complexes import Kind, build_complex, ce_boundary, loday_boundary, quotient_chain_map
from leibhom.homology import betti, betti_numbers, coinvariants_dim, hochschild_serre_check
from leibhom.lemma1 import build_counterexample, condition_ii, condition_iii, condition_iv, condition_v
from leibhom.lie import adjoint, dual_rep, sl2, tensor_rep, trivial_rep
from leibhom.linalg import matmul, rank, rank_modular
from oracles import dense_add, dense_eye, dense_kron, dense_rank, explicit_d, sl2_ad

COEFFS = {"trivial": trivial_rep, "adjoint": adjoint, "dual-adjoint": lambda g: dual_rep(adjoint(g))}


@pytest.fixture
def report_line(pytestconfig):
    capman = pytestconfig.pluginmanager.getplugin("capturemanager")

    def emit(number, ok, detail, elapsed):
        line = f"[acceptance] {number:>2} {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s) {detail}"
        if capman is None:
            print(line)
        else:
            with capman.global_and_fixture_disabled():
                print("\n" + line)

    return emit


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_01_semisimple_loday_vanishing(report_line):
    with Timer() as t:
        g = sl2()
        c = build_complex(g, trivial_rep(g), Kind.LODAY, 5)
        b = [betti(c, n) for n in range(5)]
    ok = b == [1, 0, 0, 0, 0] and t.elapsed < 10
    report_line(1, ok, f"HL_0..4(sl2) = {b}", t.elapsed)
    assert b == [1, 0, 0, 0, 0]
    assert t.elapsed < 10


def test_02_sl2_ce_betti(report_line):
    with Timer() as t:
        g = sl2()
        b = betti_numbers(build_complex(g, trivial_rep(g), Kind.CE, 3))
    # oracle: hand-ranked boundaries from the explicit formula
    d2 = explicit_d(g.bracket_basis, 3, 2)
    d3 = explicit_d(g.bracket_basis, 3, 3)
    rows2 = [[d2[t2].get((k,), 0) for t2 in sorted(d2)] for k in range(3)]
    rows3 = [[d3[t3].get(p, 0) for t3 in sorted(d3)] for p in sorted(d2)]
    r2, r3 = dense_rank(rows2), dense_rank(rows3)
    expected = [1, 3 - r2, 3 - r2 - r3, 1 - r3]
    ok = b == expected == [1, 0, 0, 1] and t.elapsed < 1
    report_line(2, ok, f"H_*(sl2) = {b}, oracle {expected}", t.elapsed)
    assert b == expected == [1, 0, 0, 1]
    assert t.elapsed < 1


def test_03_boundary_and_diagram_suite(report_line):
    failures = []
    checked = 0
    with Timer() as t:
        for name, g in sorted(CORPUS.items()):
            for cname, make in sorted(COEFFS.items()):
                m = make(g)
                lo = {n: loday_boundary(g, m, n) for n in range(1, 5)}
                cb = {n: ce_boundary(g, m, n) for n in range(1, 5)}
                pi = [quotient_chain_map(g, m, n) for n in range(0, 5)]
                for n in range(2, 5):
                    if not matmul(lo[n - 1], lo[n]).is_zero():
                        failures.append((name, cname, "delta^2", n))
                    if not matmul(cb[n - 1], cb[n]).is_zero():
                        failures.append((name, cname, "d^2", n))
                for n in range(1, 5):
                    if matmul(pi[n - 1], lo[n]) != matmul(cb[n], pi[n]):
                        failures.append((name, cname, "pi", n))
                checked += 1
    ok = not failures and t.elapsed < 120
    report_line(3, ok, f"{checked} algebra/coefficient pairs, degrees <= 4, failures {failures}", t.elapsed)
    assert failures == []
    assert t.elapsed < 120


def test_04_degree_zero_one_agreement(report_line):
    mismatches = []
    with Timer() as t:
        for name, g in sorted(CORPUS.items()):
            for cname, make in sorted(COEFFS.items()):
                m = make(g)
                lo = build_complex(g, m, Kind.LODAY, 2)
                ce = build_complex(g, m, Kind.CE, g.dim)
                a = [betti(lo, n) for n in (0, 1)]
                b = [betti(ce, n) for n in (0, 1)]
                if a != b:
                    mismatches.append((name, cname, a, b))
    report_line(4, not mismatches, f"HL_n = H_n for n in {{0,1}}, mismatches {mismatches}", t.elapsed)
    assert mismatches == []


def test_05_always_isomorphism_identity(report_line):
    rows = {}
    with Timer() as t:
        for name in ("sl2", "heisenberg", "two_dim_nonabelian", "counterexample"):
            g = CORPUS[name]
            triv = build_complex(g, trivial_rep(g), Kind.LODAY, 4)
            adj = build_complex(g, adjoint(g), Kind.LODAY, 3)
            rows[name] = [(betti(triv, p + 1), betti(adj, p)) for p in range(3)]
    ok = all(a == b for r in rows.values() for a, b in r)
    report_line(5, ok, f"(dim HL_(p+1)(g), dim HL_p(g,g)) for p<=2: {rows}", t.elapsed)
    assert ok


def test_06_counterexample_condition_v(report_line):
    with Timer() as t:
        s = sl2()
        got = coinvariants_dim(tensor_rep(adjoint(s), adjoint(s)))
    stacked = []
    for a in sl2_ad():
        stacked += dense_add(dense_kron(a, dense_eye(3)), dense_kron(dense_eye(3), a))
    oracle = 9 - dense_rank(stacked)
    ok = got == oracle == 1
    report_line(6, ok, f"dim H_0(sl2, ad⊗ad) = {got}, oracle (27x9 stacked rank) {oracle}", t.elapsed)
    assert got == oracle == 1


def test_07_hochschild_serre(report_line):
    with Timer() as t:
        rows = hochschild_serre_check(build_counterexample(), 3)
    pairs = [(r.lhs, r.rhs) for r in rows]
    ok = all(r.equal for r in rows) and pairs[1] == (1, 1) and t.elapsed < 120
    report_line(7, ok, f"(dim H_n(g,s), HS sum) for n<=3: {pairs}", t.elapsed)
    assert all(r.equal for r in rows)
    assert pairs[1] == (1, 1)
    assert t.elapsed < 120


def test_08_lemma1_failure_bundle(report_line):
    with Timer() as t:
        ld = build_counterexample()
        c2 = condition_ii(ld, 2)
        c3 = condition_iii(ld, 2)
        c4 = condition_iv(ld, 2)
        c5 = condition_v(ld, 2)
    fails = {c.condition: c.failing_degree for c in (c2, c3, c4, c5)}
    # recorded ranks must account for HL_*(g,s): coker f_n + ker f_(n-1) = dim HL_n(g,s)
    ii = c2.rows
    lhs = [c3.rows[n]["homology_dim"] for n in range(3)]
    rhs = [
        (ii[n]["target_dim"] - ii[n]["rank"]) + (ii[n - 1]["source_dim"] - ii[n - 1]["rank"] if n else 0)
        for n in range(3)
    ]
    ok = (
        fails["iii"] == fails["iv"] == fails["v"] == 1
        and fails["ii"] is not None
        and fails["ii"] <= 2
        and lhs == rhs
        and t.elapsed < 300
    )
    report_line(8, ok, f"failing degrees {fails}; HL_n(g,s) {lhs} vs sequence count {rhs}", t.elapsed)
    assert fails["iii"] == fails["iv"] == fails["v"] == 1
    assert fails["ii"] is not None and fails["ii"] <= 2
    assert lhs == rhs
    assert t.elapsed < 300


def test_09_refutation_report(report_line):
    cmd = [sys.executable, "-m", "leibhom", "counterexample", "--max-degree", "3", "--format", "machine"]
    with Timer() as t:
        first = subprocess.run(cmd, capture_output=True)
        second = subprocess.run(cmd, capture_output=True)
    rep = json.loads(first.stdout)
    verdict = rep["result"]["verdict"]
    conds = rep["result"]["conditions"]
    present = all(
        {"rows", "verdict"} <= set(conds[k]) and len(conds[k]["rows"]) == 4 for k in ("ii", "iii", "iv", "v")
    ) and len(rep["result"]["prop31"]["rows"]) == 3
    ok = (
        first.returncode == second.returncode == 0
        and first.stdout == second.stdout
        and verdict["prop31_refuted"]
        and present
    )
    detail = f"exit {first.returncode}, byte-identical {first.stdout == second.stdout}, refutation {verdict['refutation']}"
    report_line(9, ok, detail, t.elapsed)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout
    assert verdict["prop31_refuted"]
    assert present


def test_10_scale_guard(report_line):
    with Timer() as t:
        g = build_counterexample().total
        d5 = loday_boundary(g, trivial_rep(g), 5)
        r = rank(d5)
    peak_mb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
    shape = d5.shape
    agree = rank_modular(d5) == r
    ok = shape == (6**4, 6**5) and agree and t.elapsed < 300 and peak_mb < 2048
    report_line(10, ok, f"degree-5 boundary {shape}, rank {r}, modular agrees {agree}, peak RSS {peak_mb:.0f} MB", t.elapsed)
    assert shape == (1296, 7776)
    assert agree
    assert t.elapsed < 300
    assert peak_mb < 2048


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
