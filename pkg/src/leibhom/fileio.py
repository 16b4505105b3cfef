"""Versioned JSON file formats for algebras and representations, and report rendering.

Algebra file::

    {"format_version": "1", "dim": 3, "basis": ["e", "h", "f"],
     "brackets": [{"i": 0, "j": 1, "coeffs": {"e": "-2"}}, ...]}

Representation file::

    {"format_version": "1", "dim": 3,
     "action": [{"element": "e", "entries": [[row, col, "p/q"], ...]}, ...]}

``action`` may alternatively list dense matrices (lists of rows of
rational strings), one per basis element in basis order.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any

from .lie import LieAlgebra, LieError, Representation, validate_lie
from .linalg import SparseMatrix

FORMAT_VERSION = "1"
REPORT_SCHEMA_VERSION = "1"


class FormatError(ValueError):
    """Malformed input file; the message names the offending record."""


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text: Any, where: str) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise FormatError(f"{where}: expected a rational string like \"p/q\", got {text!r}")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"{where}: bad rational {text!r}") from exc


def _load_json(text: str, source: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise FormatError(f"{source}: top level must be an object")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise FormatError(f"{source}: unsupported format_version {version!r}")
    return data


def algebra_from_dict(data: dict, source: str = "<algebra>") -> LieAlgebra:
    basis = data.get("basis")
    if not isinstance(basis, list) or not all(isinstance(b, str) for b in basis):
        raise FormatError(f"{source}: 'basis' must be a list of labels")
    if "dim" in data and data["dim"] != len(basis):
        raise FormatError(f"{source}: dim {data['dim']} does not match {len(basis)} basis labels")
    if len(set(basis)) != len(basis):
        raise FormatError(f"{source}: basis labels must be unique")
    index = {b: i for i, b in enumerate(basis)}
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    for n, rec in enumerate(data.get("brackets", [])):
        where = f"{source}: brackets[{n}]"
        if not isinstance(rec, dict):
            raise FormatError(f"{where}: expected an object")
        i, j = rec.get("i"), rec.get("j")
        if not isinstance(i, int) or not isinstance(j, int):
            raise FormatError(f"{where}: 'i' and 'j' must be integers")
        if not 0 <= i < j < len(basis):
            raise FormatError(f"{where}: need 0 <= i < j < dim, got i={i}, j={j}")
        if (i, j) in brackets:
            raise FormatError(f"{where}: duplicate record for ({i}, {j})")
        coeffs = {}
        for lab, val in (rec.get("coeffs") or {}).items():
            if lab not in index:
                raise FormatError(f"{where}: unknown label {lab!r}")
            coeffs[index[lab]] = parse_rational(val, f"{where}.coeffs[{lab!r}]")
        brackets[(i, j)] = coeffs
    return LieAlgebra(basis, brackets)


def parse_algebra(text: str, source: str = "<algebra>", validate: bool = True) -> LieAlgebra:
    """Parse and (by default) Jacobi-check an algebra file."""
    g = algebra_from_dict(_load_json(text, source), source)
    if validate:
        bad = validate_lie(g)
        if bad is not None:
            raise LieError(f"{source}: {bad}")
    return g


def algebra_to_dict(g: LieAlgebra) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "dim": g.dim,
        "basis": list(g.labels),
        "brackets": [
            {"i": i, "j": j, "coeffs": {g.labels[k]: format_rational(x) for k, x in sorted(c.items())}}
            for (i, j), c in sorted(g.brackets.items())
        ],
    }


def serialize_algebra(g: LieAlgebra) -> str:
    return json.dumps(algebra_to_dict(g), indent=2) + "\n"


def parse_representation(text: str, g: LieAlgebra, source: str = "<representation>") -> Representation:
    data = _load_json(text, source)
    dim = data.get("dim")
    if not isinstance(dim, int) or dim < 0:
        raise FormatError(f"{source}: 'dim' must be a non-negative integer")
    action = data.get("action")
    if not isinstance(action, list) or len(action) != g.dim:
        raise FormatError(f"{source}: 'action' must list {g.dim} matrices")
    mats = []
    for n, block in enumerate(action):
        where = f"{source}: action[{n}]"
        if isinstance(block, dict):
            elem = block.get("element", g.labels[n])
            if elem != g.labels[n]:
                raise FormatError(f"{where}: expected element {g.labels[n]!r}, got {elem!r}")
            entries = {}
            for t, item in enumerate(block.get("entries", [])):
                if not (isinstance(item, list) and len(item) == 3):
                    raise FormatError(f"{where}.entries[{t}]: expected [row, col, value]")
                r, c, v = item
                if not (isinstance(r, int) and isinstance(c, int) and 0 <= r < dim and 0 <= c < dim):
                    raise FormatError(f"{where}.entries[{t}]: index out of range")
                entries[(r, c)] = parse_rational(v, f"{where}.entries[{t}]")
            mats.append(SparseMatrix.from_entries(dim, dim, entries))
        elif isinstance(block, list):
            if len(block) != dim or any(not isinstance(row, list) or len(row) != dim for row in block):
                raise FormatError(f"{where}: dense matrix must be {dim}x{dim}")
            mats.append(
                SparseMatrix.from_dense(
                    [[parse_rational(v, f"{where}[{r}][{c}]") for c, v in enumerate(row)] for r, row in enumerate(block)],
                    dim,
                )
            )
        else:
            raise FormatError(f"{where}: expected a sparse block or a dense matrix")
    return Representation(g, dim, mats)


def representation_to_dict(m: Representation) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "dim": m.dim,
        "action": [
            {
                "element": m.algebra.labels[i],
                "entries": [[r, c, format_rational(x)] for (r, c), x in sorted(a.entries.items(), key=lambda e: (e[0][1], e[0][0]))],
            }
            for i, a in enumerate(m.action)
        ],
    }


def digest(*parts: str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode())
        h.update(b"\0")
    return h.hexdigest()


# ---------------------------------------------------------------------------
# report emission


def emit_machine(report: dict) -> bytes:
    return (json.dumps(report, indent=2, sort_keys=True) + "\n").encode()


def _table(headers: list[str], rows: list[list[Any]]) -> list[str]:
    cells = [[str(h) for h in headers]] + [[str(x) for x in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    return ["  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells]


def render_table(title: str, rows: list[dict], columns: list[str]) -> list[str]:
    lines = [title]
    lines += _table(columns, [[row[c] for c in columns] for row in rows])
    return lines


_CONDITION_COLUMNS = {
    "ii": ["degree", "source_dim", "target_dim", "rank"],
    "iii": ["degree", "chain_dim", "rank_out", "rank_in", "homology_dim"],
    "iv": ["degree", "chain_dim", "rank_out", "rank_in", "homology_dim"],
    "v": ["degree", "radical_homology_dim", "module_dim", "coinvariants_dim"],
}

_CONDITION_TITLES = {
    "ii": "condition (ii): HL_n(g,r) -> HL_n(g,g)",
    "iii": "condition (iii): HL_n(g,s)",
    "iv": "condition (iv): H_n(g,s)",
    "v": "condition (v): H_0(s, H_q(r) (x) s)",
}


def emit_table(report: dict) -> bytes:
    """Fixed-width human rendering; one row per degree in each section."""
    lines = [f"leibhom {report['tool_version']}  input {report['input_digest'][:16]}"]
    kind = report.get("kind")
    if kind == "homology":
        lines += render_table(
            f"{report['complex']} homology, coefficients {report['coefficients']}",
            report["degrees"],
            ["degree", "chain_dim", "rank_out", "rank_in", "betti"],
        )
    elif kind == "lemma1":
        body = report["result"]
        for key in ("ii", "iii", "iv", "v"):
            cond = body["conditions"][key]
            lines.append("")
            lines += render_table(_CONDITION_TITLES[key], cond["rows"], _CONDITION_COLUMNS[key])
            failing = cond["verdict"]
            label = "FAILS" if failing.startswith("fails") else "holds"
            lines.append(f"  -> condition ({key}) {label}: {failing}")
        lines.append("")
        hs = [{"degree": r["degree"], "lhs": r["lhs"], "rhs": r["rhs"], "equal": r["equal"]} for r in body["hochschild_serre"]]
        lines += render_table("decomposition: dim H_n(g,s) vs sum dim H_p(s)*coinv", hs, ["degree", "lhs", "rhs", "equal"])
        lines.append("")
        lines += render_table(
            "long exact sequence: coker f_n + ker f_(n-1) = HL_n(g,s)",
            body["long_exact_sequence"],
            ["degree", "coker_dim", "ker_prev_dim", "hl_gs_dim", "consistent"],
        )
        lines.append("")
        lines += render_table(
            "shift isomorphism: dim HL^p(g) vs dim HL^(p-1)(g, r#)",
            body["prop31"]["rows"],
            ["degree", "lhs_dim", "rhs_dim", "lhs_via_adjoint"],
        )
        lines.append("")
        verdict = body["verdict"]
        lines.append("failing conditions: " + (", ".join(verdict["failing_conditions"]) or "none"))
        if verdict["refutation"]:
            lines.append(f"shift isomorphism refuted ({verdict['refutation']['established']}): {verdict['refutation']['statement']}")
        else:
            lines.append("shift isomorphism not refuted within the computed range")
        for key, ok in sorted(body["consistency"].items()):
            lines.append(f"check {key}: {'ok' if ok else 'FAILED'}")
    elif kind == "killing":
        lines.append("Killing form")
        lines += _table([""] + report["basis"], [[lab] + row for lab, row in zip(report["basis"], report["matrix"])])
    elif kind == "radical":
        lines.append(f"radical dimension {len(report['vectors'])}")
        for v in report["vectors"]:
            lines.append("  " + " ".join(v))
    return ("\n".join(lines) + "\n").encode()


def emit_report(report: dict, fmt: str = "table") -> bytes:
    if fmt == "machine":
        return emit_machine(report)
    if fmt == "table":
        return emit_table(report)
    raise ValueError(f"unknown report format {fmt!r}")
