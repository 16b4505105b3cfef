import itertools

import pytest

from leibhom.lemma1 import (
    condition_ii,
    condition_iii,
    condition_iv,
    condition_v,
    exactness_check,
    full_report,
    inclusion_chain_map,
    prop31_table,
    semisimple_levi,
    solvable_levi,
)
from leibhom.lie import heisenberg, sl2, trivial_rep
from oracles import dense_rank, homology_dims, explicit_delta


@pytest.fixture(scope="module")
def report(counterexample):
    return full_report(counterexample, 3)


def test_condition_iii_rows(counterexample):
    c = condition_iii(counterexample, 3)
    assert [r["homology_dim"] for r in c.rows] == [0, 1, 1, 1]
    assert [r["chain_dim"] for r in c.rows] == [3, 18, 108, 648]
    assert c.verdict == "fails-at-degree-1"


def test_condition_iv_rows(counterexample):
    c = condition_iv(counterexample, 3)
    assert [r["homology_dim"] for r in c.rows] == [0, 1, 1, 0]
    assert c.failing_degree == 1


def test_condition_v_rows(counterexample):
    c = condition_v(counterexample, 3)
    assert [r["coinvariants_dim"] for r in c.rows] == [0, 1, 1, 0]
    assert [r["radical_homology_dim"] for r in c.rows] == [1, 3, 3, 1]
    assert c.failing_degree == 1


def test_condition_ii_rows(counterexample):
    c = condition_ii(counterexample, 3)
    rows = [(r["source_dim"], r["target_dim"], r["rank"]) for r in c.rows]
    assert rows == [(0, 0, 0), (1, 1, 0), (1, 1, 1), (1, 1, 0)]
    assert c.failing_degree == 1


def test_long_exact_sequence_bookkeeping(counterexample):
    rows = exactness_check(condition_ii(counterexample, 3), condition_iii(counterexample, 3))
    assert all(r["consistent"] for r in rows)
    assert [(r["coker_dim"], r["ker_prev_dim"]) for r in rows] == [(0, 0), (1, 0), (0, 1), (1, 0)]


def test_inclusion_is_coordinate_embedding(counterexample):
    f = inclusion_chain_map(counterexample, 2)
    assert f.shape == (216, 108)
    assert f.nnz == 108 and all(f[(i, i)] == 1 for i in range(108))


def test_prop31_dimensions_agree_but_map_is_not_bijective(report):
    rows = report["prop31"]["rows"]
    assert [(r["lhs_dim"], r["rhs_dim"]) for r in rows] == [(0, 0), (1, 1), (1, 1)]
    assert report["prop31"]["first_disagreement"] is None
    v = report["verdict"]
    assert v["prop31_refuted"]
    assert v["refutation"]["established"] == "induced-map"
    assert v["refutation"]["degree"] == 1
    assert v["failing_conditions"] == ["ii", "iii", "iv", "v"]


def test_prop31_lhs_matches_trivial_oracle(counterexample):
    g = counterexample.total
    dims = {n: g.dim**n for n in range(4)}
    bds = {}
    for n in range(1, 4):
        cols = explicit_delta(g.bracket_basis, g.dim, n)
        rows = sorted({k for col in cols.values() for k in col} | set(itertools.product(range(g.dim), repeat=n - 1)))
        index = {k: i for i, k in enumerate(rows)}
        mat = [[0] * len(cols) for _ in rows]
        for j, (w, col) in enumerate(sorted(cols.items())):
            for k, v in col.items():
                mat[index[k]][j] = v
        bds[n] = mat
    assert homology_dims(bds, dims, 2) == [1, 0, 1]
    assert [r["lhs_dim"] for r in prop31_table(counterexample, 2).rows] == [0, 1]


def test_all_consistency_checks_pass(report):
    assert all(report["consistency"].values())


def test_semisimple_has_nothing_to_fail():
    r = full_report(semisimple_levi(sl2()), 2)
    assert r["verdict"]["failing_conditions"] == []
    assert not r["verdict"]["prop31_refuted"]
    assert all(r["consistency"].values())


def test_solvable_has_nothing_to_fail():
    r = full_report(solvable_levi(heisenberg()), 2)
    assert r["verdict"]["failing_conditions"] == []
    assert [row["lhs_dim"] for row in r["prop31"]["rows"]] == [2, 5]
    assert all(r["consistency"].values())


def test_report_is_deterministic(counterexample, report):
    assert full_report(counterexample, 3) == report
