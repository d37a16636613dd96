"""Command-line front end.

Exit codes: 0 holds / implied / report passes, 1 fails / not implied /
counterexample found, 2 usage or input error, 3 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any

from . import dependency as dep
from .errors import MvdLabError, ResourceError
from .formats import (
    format_relation,
    load_relation,
    load_statement_set,
    load_zemvd_set,
    parse_statement,
)
from .implication import cover_contains, lemma3_implies, nonaxiomatizability_report
from .relation import attrset, fmt_attrs, inverse, marginalize, monotone_join, product_join
from .witness import SearchBounds, find_witness

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


def _emit(args, text: str, data: dict[str, Any]) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _relation_doc(rel) -> dict[str, Any]:
    return {
        "schema": list(rel.schema),
        "rows": [{"values": list(t), "weight": str(w)} for t, w in rel.items()],
    }


def _emit_relation(args, rel) -> int:
    if args.json:
        print(json.dumps(_relation_doc(rel), indent=2, sort_keys=True))
    else:
        sys.stdout.write(format_relation(rel))
    return EXIT_OK


def cmd_marg(args) -> int:
    return _emit_relation(args, marginalize(load_relation(args.file), attrset(args.onto)))


def cmd_pjoin(args) -> int:
    return _emit_relation(args, product_join(load_relation(args.file1), load_relation(args.file2)))


def cmd_inv(args) -> int:
    return _emit_relation(args, inverse(load_relation(args.file)))


def cmd_mjoin(args) -> int:
    rel = load_relation(args.file)
    return _emit_relation(args, monotone_join(rel, attrset(args.left), attrset(args.right)))


def cmd_check(args) -> int:
    rel = load_relation(args.file)
    stmt = parse_statement(args.statement, args.kind)
    t0 = time.perf_counter()
    ok = dep.holds(rel, stmt, args.method)
    elapsed = time.perf_counter() - t0
    data = {"claim": str(stmt), "kind": args.kind, "verdict": ok}
    if stmt.kind in (dep.Kind.MVD, dep.Kind.EMVD):
        data["method"] = args.method
    if args.timing:
        data["seconds"] = round(elapsed, 6)
    reading = ""
    if stmt.kind is dep.Kind.CI:
        given = fmt_attrs(stmt.lhs) if stmt.lhs else "nothing"
        reading = f" ({fmt_attrs(stmt.first)} independent of {fmt_attrs(stmt.second)} given {given})"
    _emit(args, f"{'holds' if ok else 'fails'}: {args.kind} {stmt}{reading}", data)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_cover(args) -> int:
    sigma = load_zemvd_set(args.sigma)
    stmt = parse_statement(args.statement, source="<statement>")
    res = cover_contains(sigma, stmt)
    data = res.to_dict()
    lines = [f"{'in cover' if res.holds else 'not in cover'}: {stmt}"]
    if res.holds:
        lines.append(f"path ({len(res.path)} arcs): " + " -> ".join(f"[{p}]" for p in data["path"]))
        lines += [f"  {a}" for a in res.path]
    _emit(args, "\n".join(lines), data)
    return EXIT_OK if res.holds else EXIT_NEGATIVE


def cmd_derive(args) -> int:
    sigma = load_zemvd_set(args.sigma)
    tau = parse_statement(args.statement)
    res = lemma3_implies(sigma, tau, args.max_candidates)
    lines = [f"{'implied' if res.holds else 'not implied'}: {tau}"]
    if res.holds and res.member is None:
        lines.append("trivial statement")
    elif res.holds:
        lines.append(f"cover member: {res.member}")
        lines.append("path: " + " -> ".join(f"[{p}]" for p in res.cover.to_dict()["path"]))
        if res.derivation.steps:
            for st in res.derivation.steps:
                lines.append(f"  {st.describe():<32} => {st.result}")
        else:
            lines.append("  (no axiom steps: the member is the statement itself)")
    _emit(args, "\n".join(lines), res.to_dict())
    return EXIT_OK if res.holds else EXIT_NEGATIVE


def cmd_counterexample(args) -> int:
    report = nonaxiomatizability_report(args.n, args.block_size, args.z_size)
    if args.json:
        print(json.dumps(report.to_dict(args.timing), indent=2, sort_keys=True))
    else:
        print(report.to_text(args.timing))
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def cmd_witness(args) -> int:
    sigma = load_statement_set(args.sigma)
    tau = parse_statement(args.statement)
    bounds = SearchBounds(domain_size=args.domain, max_tuples=args.max_tuples,
                          max_candidates=args.max_candidates, seed=args.seed,
                          space_cap=args.space_cap)
    report = find_witness(sigma, tau, bounds)
    data = report.to_dict(args.timing)
    lines = [f"{report.outcome}: {tau} against {len(sigma)} statement(s)",
             f"candidates examined: {report.candidates} of {report.space_size}"]
    if report.found:
        lines.append("relation satisfying every statement but violating the target:")
        lines.append(data["counterexample"].rstrip("\n"))
    lines += report.notes
    _emit(args, "\n".join(lines), data)
    return EXIT_NEGATIVE if report.found else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured (JSON) output")
    common.add_argument("--timing", action="store_true", help="include timings in the output")

    parser = argparse.ArgumentParser(
        prog="mvdlab",
        description="Weighted relations, MVD / conditional-independence checks, Z-EMVD implication.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("marg", parents=[common], help="marginalize a relation")
    p.add_argument("file")
    p.add_argument("--onto", required=True, help="comma-separated attributes, or _")
    p.set_defaults(func=cmd_marg)

    p = sub.add_parser("pjoin", parents=[common], help="product join of two relations")
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(func=cmd_pjoin)

    p = sub.add_parser("inv", parents=[common], help="inverse relation")
    p.add_argument("file")
    p.set_defaults(func=cmd_inv)

    p = sub.add_parser("mjoin", parents=[common], help="monotone join of two marginals")
    p.add_argument("file")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(func=cmd_mjoin)

    p = sub.add_parser("check", parents=[common], help="check a dependency on a relation")
    p.add_argument("kind", choices=[k.value for k in dep.Kind])
    p.add_argument("file")
    p.add_argument("statement", help='e.g. "A ->> B | C"')
    p.add_argument("--method", choices=dep.MVD_METHODS, default="definition")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("cover", parents=[common], help="cover membership with a path witness")
    p.add_argument("sigma")
    p.add_argument("statement")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("derive", parents=[common], help="implication with a derivation trace")
    p.add_argument("sigma")
    p.add_argument("statement")
    p.add_argument("--max-candidates", type=int, default=1_000_000)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("counterexample", parents=[common],
                       help="non-axiomatizability report for the cyclic family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--block-size", type=int, default=1)
    p.add_argument("--z-size", type=int, default=1)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("witness", parents=[common], help="bounded counterexample search")
    p.add_argument("sigma")
    p.add_argument("statement")
    p.add_argument("--domain", type=int, default=2)
    p.add_argument("--max-tuples", type=int, default=None)
    p.add_argument("--max-candidates", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--space-cap", type=int, default=4096)
    p.set_defaults(func=cmd_witness)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"mvdlab: resource bound exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except MvdLabError as exc:
        print(f"mvdlab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
