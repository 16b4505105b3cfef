"""Command line entry point.

Exit codes: 0 success, 1 validation or parse failure, 2 budget exceeded,
3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .complexes import BudgetExceeded, ChainComplexError, Kind, build_complex
from .fileio import (
    FormatError,
    algebra_to_dict,
    digest,
    emit_report,
    format_rational,
    parse_algebra,
    parse_representation,
    representation_to_dict,
    serialize_algebra,
)
from .homology import ChainMapError, betti
from .lemma1 import DEFAULT_MAX_DEGREE, build_counterexample, full_report
from .linalg import Vector
from .lie import (
    LieError,
    adjoint,
    dual_rep,
    killing_form,
    levi_data,
    radical,
    trivial_rep,
    validate_rep,
)

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from exc


def _coefficients(g, spec: str):
    if spec == "trivial":
        return trivial_rep(g)
    if spec == "adjoint":
        return adjoint(g)
    if spec == "dual-adjoint":
        return dual_rep(adjoint(g))
    if spec.startswith("file:"):
        path = spec[5:]
        m = parse_representation(_read(path), g, path)
        bad = validate_rep(m)
        if bad is not None:
            raise LieError(f"{path}: {bad}")
        return m
    raise FormatError(f"unknown coefficient spec {spec!r}")


def _indices(spec: str, dim: int, what: str) -> list[int]:
    if not spec.startswith("indices:"):
        raise FormatError(f"{what} must be given as indices:<comma separated list>")
    body = spec[len("indices:"):].strip()
    try:
        out = [int(x) for x in body.split(",")] if body else []
    except ValueError as exc:
        raise FormatError(f"{what}: bad index list {body!r}") from exc
    if any(not 0 <= i < dim for i in out) or len(set(out)) != len(out):
        raise FormatError(f"{what}: indices must be distinct and in 0..{dim - 1}")
    return out


def _vector_strings(v: Vector) -> list[str]:
    return [format_rational(x) for x in v.to_dense()]


def cmd_validate(args) -> tuple[dict | None, str]:
    g = parse_algebra(_read(args.algebra), args.algebra)
    return None, f"ok: {g.dim}-dimensional Lie algebra, Jacobi identity holds\n"


def cmd_homology(args):
    text = _read(args.algebra)
    g = parse_algebra(text, args.algebra)
    m = _coefficients(g, args.coeff)
    kind = Kind(args.complex)
    n = args.max_degree
    top = max(g.dim, n + 1) if kind is Kind.CE else n + 1
    c = build_complex(g, m, kind, top, args.budget)
    degrees = []
    for k in range(n + 1):
        degrees.append(
            {
                "degree": k,
                "chain_dim": c.dim(k),
                "rank_out": c.boundary_rank(k, args.modular),
                "rank_in": c.boundary_rank(k + 1, args.modular),
                "betti": betti(c, k, args.modular),
            }
        )
    coeff_text = args.coeff
    if args.coeff.startswith("file:"):
        coeff_text = "file:" + digest(str(representation_to_dict(m)))[:16]
    return {
        "kind": "homology",
        "complex": kind.value,
        "coefficients": coeff_text,
        "max_degree": n,
        "degrees": degrees,
        "input_digest": digest(serialize_algebra(g), kind.value, coeff_text, str(n)),
    }, None


def cmd_lemma1(args):
    g = parse_algebra(_read(args.algebra), args.algebra)
    if args.radical == "auto":
        rad = radical(g)
    else:
        rad = [Vector(g.dim, {i: 1}) for i in _indices(args.radical, g.dim, "--radical")]
    if args.section is None:
        if len(rad) != g.dim:
            raise FormatError("--section is required unless the radical is the whole algebra")
        sec = []
    else:
        sec = [Vector(g.dim, {i: 1}) for i in _indices(args.section, g.dim, "--section")]
    ld = levi_data(g, rad, sec)
    result = full_report(ld, args.max_degree, args.modular, args.budget)
    return {
        "kind": "lemma1",
        "result": result,
        "input_digest": digest(serialize_algebra(g), args.radical, str(args.section), str(args.max_degree)),
    }, None


def cmd_counterexample(args):
    ld = build_counterexample()
    result = full_report(ld, args.max_degree, args.modular, args.budget)
    return {
        "kind": "lemma1",
        "result": result,
        "input_digest": digest(serialize_algebra(ld.total), "counterexample", str(args.max_degree)),
    }, None


def cmd_killing(args):
    g = parse_algebra(_read(args.algebra), args.algebra)
    k = killing_form(g)
    return {
        "kind": "killing",
        "basis": list(g.labels),
        "matrix": [[format_rational(x) for x in row] for row in k],
        "input_digest": digest(serialize_algebra(g), "killing"),
    }, None


def cmd_radical(args):
    g = parse_algebra(_read(args.algebra), args.algebra)
    return {
        "kind": "radical",
        "basis": list(g.labels),
        "vectors": [_vector_strings(v) for v in radical(g)],
        "input_digest": digest(serialize_algebra(g), "radical"),
    }, None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--modular", action="store_true", help="rank modulo several large primes (opt-in)")
    common.add_argument("--budget", type=int, default=None, help="max predicted nonzero boundary entries")
    common.add_argument("--format", choices=["table", "machine"], default="table")

    p = argparse.ArgumentParser(prog="leibhom", description="Exact Lie and Leibniz homology calculator")
    p.add_argument("--version", action="version", version=f"leibhom {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check antisymmetry and Jacobi")
    s.add_argument("algebra")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("homology", parents=[common], help="Betti numbers of a CE or Loday complex")
    s.add_argument("algebra")
    s.add_argument("--complex", choices=["ce", "loday"], required=True)
    s.add_argument("--coeff", default="trivial", help="trivial | adjoint | dual-adjoint | file:<rep-file>")
    s.add_argument("--max-degree", type=int, required=True)
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("lemma1", parents=[common], help="evaluate Lemma 1 conditions")
    s.add_argument("algebra")
    s.add_argument("--radical", default="auto", help="auto | indices:<list>")
    s.add_argument("--section", default=None, help="indices:<list>")
    s.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    s.set_defaults(func=cmd_lemma1)

    s = sub.add_parser("counterexample", parents=[common], help="full report for sl2 ⋉ ad")
    s.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    s.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("killing", parents=[common], help="print the Killing form")
    s.add_argument("algebra")
    s.set_defaults(func=cmd_killing)

    s = sub.add_parser("radical", parents=[common], help="solvable radical via Killing orthogonality")
    s.add_argument("algebra")
    s.set_defaults(func=cmd_radical)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "max_degree", 0) is not None and getattr(args, "max_degree", 0) < 0:
        print("error: --max-degree must be non-negative", file=sys.stderr)
        return EXIT_INVALID
    try:
        report, message = args.func(args)
    except (FormatError, LieError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ChainComplexError, ChainMapError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if message is not None:
        sys.stdout.write(message)
        return EXIT_OK
    report = {"schema_version": "1", "tool_version": __version__, **report}
    sys.stdout.buffer.write(emit_report(report, args.format))
    sys.stdout.flush()
    checks = report.get("result", {}).get("consistency", {})
    if not all(checks.values()):
        print("internal error: consistency cross-check failed", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
