"""Lemma 1 conditions (ii)-(v), the shift-isomorphism table and the full report.

All verdicts are derived from recorded dimensions and ranks, so a report
can be audited (and recomputed) from its own numbers.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any

from .complexes import ChainComplex, Kind, build_complex
from .homology import (
    betti,
    coinvariants_dim,
    hochschild_serre_check,
    homology_basis,
    induced_on_homology,
    radical_homology_reps,
)
from .lie import (
    LeviData,
    Representation,
    abelian,
    adjoint,
    ideal_module,
    levi_from_semidirect,
    quotient_module,
    restrict_rep_via_section,
    sl2,
    tensor_rep,
    trivial_rep,
)
from .linalg import SparseMatrix

DEFAULT_MAX_DEGREE = 3


@dataclass
class ConditionReport:
    condition: str
    max_degree: int
    rows: list[dict[str, Any]]
    # name of the row field that must vanish (or be true) for the condition to hold
    witness: str

    def _ok(self, row: dict[str, Any]) -> bool:
        if self.witness == "bijective":
            return row["source_dim"] == row["target_dim"] == row["rank"]
        return row[self.witness] == 0

    @property
    def failing_degree(self) -> int | None:
        for row in self.rows:
            if not self._ok(row):
                return row["degree"]
        return None

    @property
    def holds(self) -> bool:
        return self.failing_degree is None

    @property
    def verdict(self) -> str:
        k = self.failing_degree
        return f"holds-up-to-{self.max_degree}" if k is None else f"fails-at-degree-{k}"

    def to_dict(self) -> dict[str, Any]:
        return {
            "condition": self.condition,
            "max_degree": self.max_degree,
            "rows": self.rows,
            "verdict": self.verdict,
        }


def build_counterexample() -> LeviData:
    """sl2 acting on the abelian 3-dimensional algebra by the adjoint representation."""
    s = sl2()
    r = abelian(3, ["u_e", "u_h", "u_f"])
    action = Representation(s, 3, adjoint(s).action)
    return levi_from_semidirect(s, r, action)


def semisimple_levi(s) -> LeviData:
    """Levi data of a semisimple algebra: r = 0, section = everything."""
    r = abelian(0)
    return levi_from_semidirect(s, r, Representation(s, 0, [SparseMatrix.zeros(0, 0)] * s.dim))


def solvable_levi(g) -> LeviData:
    """Levi data with r = g and s = 0."""
    s = abelian(0)
    return LeviData(g, g.dim, g, s, Representation(s, g.dim, []))


def _betti_rows(c: ChainComplex, max_degree: int, modular: bool) -> list[dict[str, Any]]:
    rows = []
    for n in range(max_degree + 1):
        rows.append(
            {
                "degree": n,
                "chain_dim": c.dim(n),
                "rank_out": c.boundary_rank(n, modular),
                "rank_in": c.boundary_rank(n + 1, modular),
                "homology_dim": betti(c, n, modular),
            }
        )
    return rows


def condition_iii(ld: LeviData, max_degree: int = DEFAULT_MAX_DEGREE, modular: bool = False, budget: int | None = None) -> ConditionReport:
    """HL_n(g, s) for n <= max_degree; holds iff all vanish."""
    c = build_complex(ld.total, quotient_module(ld), Kind.LODAY, max_degree + 1, budget)
    return ConditionReport("iii", max_degree, _betti_rows(c, max_degree, modular), "homology_dim")


def condition_iv(ld: LeviData, max_degree: int = DEFAULT_MAX_DEGREE, modular: bool = False, budget: int | None = None) -> ConditionReport:
    """H_n(g, s) for n <= max_degree; holds iff all vanish."""
    g = ld.total
    c = build_complex(g, quotient_module(ld), Kind.CE, max(g.dim, max_degree + 1), budget)
    return ConditionReport("iv", max_degree, _betti_rows(c, max_degree, modular), "homology_dim")


def condition_v(ld: LeviData, max_degree: int = DEFAULT_MAX_DEGREE, modular: bool = False) -> ConditionReport:
    """dim H_0(s, H_q(r) ⊗ s) for q <= max_degree."""
    s_adj = restrict_rep_via_section(ld, quotient_module(ld))
    rows = []
    for q, h in enumerate(radical_homology_reps(ld, max_degree)):
        m = tensor_rep(h, s_adj)
        rows.append(
            {
                "degree": q,
                "radical_homology_dim": h.dim,
                "module_dim": m.dim,
                "coinvariants_dim": coinvariants_dim(m, modular),
            }
        )
    return ConditionReport("v", max_degree, rows, "coinvariants_dim")


def inclusion_chain_map(ld: LeviData, n: int) -> SparseMatrix:
    """r ⊗ g^⊗n -> g ⊗ g^⊗n induced by the coordinate inclusion of r."""
    size = ld.total.dim**n
    k = ld.ideal_dim
    cols = [{i: 1} for i in range(k * size)]
    return SparseMatrix(ld.total.dim * size, k * size, cols)


def condition_ii(ld: LeviData, max_degree: int = DEFAULT_MAX_DEGREE, modular: bool = False, budget: int | None = None) -> ConditionReport:
    """Induced map HL_n(g, r) -> HL_n(g, g) for n <= max_degree; holds iff each is bijective."""
    g = ld.total
    src = build_complex(g, ideal_module(ld), Kind.LODAY, max_degree + 1, budget)
    dst = build_complex(g, adjoint(g), Kind.LODAY, max_degree + 1, budget)
    f = {n: inclusion_chain_map(ld, n) for n in range(max_degree + 2)}
    rows = []
    for n in range(max_degree + 1):
        im = induced_on_homology(f, src, dst, n)
        rows.append(
            {
                "degree": n,
                "source_dim": im.source.count,
                "target_dim": im.target.count,
                "rank": im.rank,
            }
        )
    return ConditionReport("ii", max_degree, rows, "bijective")


def exactness_check(cond_ii: ConditionReport, cond_iii: ConditionReport) -> list[dict[str, Any]]:
    """Long-exact-sequence bookkeeping for 0 -> r -> g -> s -> 0:
    dim HL_n(g,s) = dim coker(f_n) + dim ker(f_{n-1})."""
    rows = []
    ii = {r["degree"]: r for r in cond_ii.rows}
    for row in cond_iii.rows:
        n = row["degree"]
        if n not in ii:
            continue
        coker = ii[n]["target_dim"] - ii[n]["rank"]
        ker = ii[n - 1]["source_dim"] - ii[n - 1]["rank"] if n - 1 in ii else 0
        rows.append(
            {
                "degree": n,
                "coker_dim": coker,
                "ker_prev_dim": ker,
                "hl_gs_dim": row["homology_dim"],
                "consistent": coker + ker == row["homology_dim"],
            }
        )
    return rows


@dataclass
class Prop31Table:
    rows: list[dict[str, Any]]

    @property
    def first_disagreement(self) -> int | None:
        for row in self.rows:
            if row["lhs_dim"] != row["rhs_dim"]:
                return row["degree"]
        return None

    def to_dict(self) -> dict[str, Any]:
        return {"rows": self.rows, "first_disagreement": self.first_disagreement}


def prop31_table(ld: LeviData, max_degree: int = DEFAULT_MAX_DEGREE, modular: bool = False, budget: int | None = None) -> Prop31Table:
    """dim HL^p(g) against dim HL^{p-1}(g, r^♯) for 1 <= p <= max_degree.

    Both read through duality: dim HL^p(g) = dim HL_p(g) and
    dim HL^{p-1}(g, r^♯) = dim HL_{p-1}(g, r).  The column
    ``lhs_via_adjoint`` is dim HL_{p-1}(g, g), which must equal ``lhs_dim``.
    """
    g = ld.total
    triv = build_complex(g, trivial_rep(g), Kind.LODAY, max_degree + 1, budget)
    rad = build_complex(g, ideal_module(ld), Kind.LODAY, max_degree, budget)
    adj = build_complex(g, adjoint(g), Kind.LODAY, max_degree, budget)
    rows = []
    for p in range(1, max_degree + 1):
        rows.append(
            {
                "degree": p,
                "lhs_dim": betti(triv, p, modular),
                "rhs_dim": betti(rad, p - 1, modular),
                "lhs_via_adjoint": betti(adj, p - 1, modular),
            }
        )
    return Prop31Table(rows)


def full_report(ld: LeviData, max_degree: int = DEFAULT_MAX_DEGREE, modular: bool = False, budget: int | None = None) -> dict[str, Any]:
    """Run conditions (ii)-(v), the decomposition check and the shift-isomorphism table."""
    c2 = condition_ii(ld, max_degree, modular, budget)
    c3 = condition_iii(ld, max_degree, modular, budget)
    c4 = condition_iv(ld, max_degree, modular, budget)
    c5 = condition_v(ld, max_degree, modular)
    hs = hochschild_serre_check(ld, max_degree, modular)
    table = prop31_table(ld, max_degree, modular, budget)
    exact = exactness_check(c2, c3)

    failing = [c.condition for c in (c2, c3, c4, c5) if not c.holds]
    k = table.first_disagreement
    if k is not None:
        refutation = {
            "established": "dimension",
            "degree": k,
            "statement": f"dim HL^p(g) != dim HL^(p-1)(g, r#) at p = {k}",
        }
    elif not c2.holds:
        refutation = {
            "established": "induced-map",
            "degree": c2.failing_degree,
            "statement": f"canonical map HL_*(g,r) -> HL_*(g,g) not bijective at degree {c2.failing_degree}",
        }
    else:
        refutation = None

    consistency = {
        "hs_decomposition_matches": all(r.equal for r in hs),
        "degree_0_1_agreement": all(
            c3.rows[n]["homology_dim"] == c4.rows[n]["homology_dim"] for n in range(min(2, max_degree + 1))
        ),
        "long_exact_sequence": all(r["consistent"] for r in exact),
        "holds_always_identity": all(r["lhs_dim"] == r["lhs_via_adjoint"] for r in table.rows),
    }
    return {
        "algebra": {
            "dim": ld.total.dim,
            "labels": list(ld.total.labels),
            "radical_dim": ld.ideal_dim,
            "quotient_dim": ld.section_dim,
        },
        "max_degree": max_degree,
        "conditions": {c.condition: c.to_dict() for c in (c2, c3, c4, c5)},
        "hochschild_serre": [
            {"degree": r.degree, "lhs": r.lhs, "rhs": r.rhs, "terms": [list(t) for t in r.terms], "equal": r.equal}
            for r in hs
        ],
        "long_exact_sequence": exact,
        "prop31": table.to_dict(),
        "consistency": consistency,
        "verdict": {
            "failing_conditions": failing,
            "prop31_refuted": refutation is not None,
            "refutation": refutation,
        },
    }
