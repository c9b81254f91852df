"""Command line front end: check, explain, dot, bench and fuzz."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from typing import Callable, Optional

from .checker import (
    CheckConfig,
    Verdict,
    analyze,
    certificate_to_json,
    check_poly,
    verdict_from_analysis,
)
from .families import chained_cycles, random_document
from .normalize import normalize
from .oracle import BoundExceeded, OracleTimeout, check_buchi
from .proof_format import ParseError, ProofDocument, SemanticError, parse_document, serialize_document
from .traces import TraceContext, progressing_summary

EXIT_VALID = 0
EXIT_INVALID = 1
EXIT_ERROR = 2
EXIT_BOUND = 3

DEFAULT_ORACLE_BOUND = 400


def oracle_bound() -> int:
    env = os.environ.get("CPROOF_ORACLE_BOUND")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_ORACLE_BOUND


def _load(path: str, err=None) -> Optional[ProofDocument]:
    err = err if err is not None else sys.stderr
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=err)
        return None
    try:
        return parse_document(text)
    except (ParseError, SemanticError) as exc:
        print(f"error: {path}: {exc}", file=err)
        return None


def _stats(doc: ProofDocument) -> dict:
    pp = doc.preproof
    return {"nodes": len(pp.nodes), "backlinks": pp.backlink_count(), "depth": pp.depth()}


def cmd_check(args, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    doc = _load(args.file, err)
    if doc is None:
        return EXIT_ERROR
    stats = _stats(doc)
    report: dict = {"document": doc.name, "method": args.method, "stats": stats}
    code = EXIT_VALID

    if args.method in ("poly", "both"):
        t0 = time.perf_counter()
        analysis = analyze(doc, CheckConfig())
        verdict = verdict_from_analysis(doc, analysis)
        ms = (time.perf_counter() - t0) * 1000
        valid_paths = sum(1 for c in analysis.comparisons if c.valid)
        report["poly"] = {
            "status": verdict.status,
            "rb_paths": [
                {"root": c.path.root, "bud": c.path.bud, "valid": c.valid}
                for c in analysis.comparisons],
            "rb_paths_valid": valid_paths,
            "measures": {str(r): list(m.items)
                         for r, m in sorted(analysis.measures.per_root.items())},
            "timing_ms": round(ms, 3),
        }
        if verdict.reason:
            report["poly"]["reason"] = verdict.reason
        if verdict.certificate is not None:
            report["poly"]["certificate"] = certificate_to_json(verdict.certificate)
        if verdict.status != "Valid":
            code = EXIT_INVALID

    if args.method in ("buchi", "both"):
        t0 = time.perf_counter()
        try:
            oracle = check_buchi(doc, state_bound=oracle_bound())
            ms = (time.perf_counter() - t0) * 1000
            report["buchi"] = {"status": oracle.status, "timing_ms": round(ms, 3)}
            if oracle.lasso is not None:
                report["buchi"]["lasso"] = {"stem": list(oracle.lasso.stem),
                                            "loop": list(oracle.lasso.loop)}
            if oracle.status != "Valid":
                code = max(code, EXIT_INVALID)
        except BoundExceeded as exc:
            report["buchi"] = {"status": "BoundExceeded", "detail": str(exc)}
            code = EXIT_BOUND

    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True), file=out)
    else:
        print(f"document: {report['document']}", file=out)
        print(f"nodes: {stats['nodes']}  back-links: {stats['backlinks']}  "
              f"depth: {stats['depth']}", file=out)
        if "poly" in report:
            p = report["poly"]
            n = len(p["rb_paths"])
            line = f"poly: {p['status']}  ({p['rb_paths_valid']}/{n} rb-paths valid)"
            line += f"  [{p['timing_ms']} ms]"
            print(line, file=out)
            if "reason" in p:
                print(f"  {p['reason']}", file=out)
        if "buchi" in report:
            b = report["buchi"]
            line = f"buchi: {b['status']}"
            if "timing_ms" in b:
                line += f"  [{b['timing_ms']} ms]"
            print(line, file=out)
            if "lasso" in b:
                stem = " ".join(str(x) for x in b["lasso"]["stem"])
                loop = " ".join(str(x) for x in b["lasso"]["loop"])
                print(f"  counterexample lasso: {stem} | {loop}", file=out)
    return code


def cmd_explain(args, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    doc = _load(args.file, err)
    if doc is None:
        return EXIT_ERROR
    analysis = analyze(doc, CheckConfig())
    print(f"document: {doc.name}", file=out)
    if not analysis.paths:
        print("no cyclic SCCs", file=out)
        return EXIT_VALID
    all_valid = True
    for comp in analysis.comparisons:
        path = comp.path
        print(f"{path.root} to {path.bud}", file=out)
        entries = analysis.summaries[(path.root, path.bud)]
        for root_idx, bud_idx, flag in sorted(progressing_summary(entries)):
            word = "true " if flag else "false"
            print(f"  {bud_idx} -> {root_idx} [{word}]", file=out)
        print(f"  ===> {'true' if comp.valid else 'false'}", file=out)
        all_valid = all_valid and comp.valid
    print("measures:", file=out)
    for root, measure in sorted(analysis.measures.per_root.items()):
        items = ", ".join(str(i) for i in measure.items)
        print(f"  root {root}: {{{items}}}", file=out)
    return EXIT_VALID if all_valid else EXIT_INVALID


def render_dot(doc: ProofDocument) -> str:
    nd = normalize(doc.preproof)
    ctx = TraceContext(nd.nodes, doc.system, nd.induction_fn)
    lines = ["digraph preproof {"]
    for nid in sorted(nd.nodes):
        label = str(nd.nodes[nid].sequent).replace('"', "'")
        lines.append(f'  n{nid} [label="{nid}: {label}"];')
    for nid in sorted(nd.nodes):
        node = nd.nodes[nid]
        for pos, prem in enumerate(node.premises):
            pairs = ctx.step_pairs(nid, pos)
            style = "bold" if any(tp.progressing for tp in pairs) else "solid"
            lines.append(f"  n{nid} -> n{prem} [style={style}];")
    for bud, root in sorted(nd.induction_fn.items()):
        lines.append(f"  n{bud} -> n{root} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_dot(args, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    doc = _load(args.file, err)
    if doc is None:
        return EXIT_ERROR
    text = render_dot(doc)
    if args.out == "-":
        out.write(text)
        return EXIT_VALID
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=err)
        return EXIT_ERROR
    return EXIT_VALID


def bench_row(size: int, timeout_s: float, bound: int) -> tuple[int, float, str]:
    doc = chained_cycles(size)
    best = None
    for _ in range(3):
        t0 = time.perf_counter()
        check_poly(doc, CheckConfig())
        dt = (time.perf_counter() - t0) * 1000
        best = dt if best is None else min(best, dt)
    t0 = time.perf_counter()
    try:
        check_buchi(doc, state_bound=bound, deadline=time.monotonic() + timeout_s)
        oracle = f"{(time.perf_counter() - t0) * 1000:.3f}"
    except BoundExceeded:
        oracle = "bound_exceeded"
    except OracleTimeout:
        oracle = "timeout"
    return size, best, oracle


def cmd_bench(args, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    if args.family != "chained-cycles":
        print(f"error: unknown family {args.family}", file=err)
        return EXIT_ERROR
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError:
        print(f"error: bad size list {args.sizes!r}", file=err)
        return EXIT_ERROR
    bound = oracle_bound()
    print("size,poly_ms,oracle_ms", file=out)
    for size in sizes:
        size, poly_ms, oracle = bench_row(size, args.oracle_timeout, bound)
        print(f"{size},{poly_ms:.3f},{oracle}", file=out)
    return EXIT_VALID


def fuzz_run(count: int, max_nodes: int, seed: int,
             poly_checker: Optional[Callable[[ProofDocument], Verdict]] = None,
             ) -> list[tuple[ProofDocument, object]]:
    """Run both checkers on random documents; return containment violations.

    A violation is a document the polynomial method accepts but the
    automaton check rejects. The poly checker can be swapped out, which the
    tests use to confirm the harness catches deliberately broken orderings.
    """
    rng = random.Random(seed)
    checker = poly_checker or (lambda d: check_poly(d, CheckConfig()))
    violations = []
    for i in range(count):
        doc = random_document(rng, max_nodes, name=f"fuzz-{seed}-{i}")
        verdict = checker(doc)
        oracle = check_buchi(doc, state_bound=oracle_bound())
        if verdict.status == "Valid" and oracle.status == "Invalid":
            violations.append((doc, oracle.lasso))
    return violations


def cmd_fuzz(args, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    violations = fuzz_run(args.count, args.max_nodes, args.seed)
    if violations:
        doc, lasso = violations[0]
        print(f"containment violated on {doc.name}; lasso {lasso}", file=err)
        print(serialize_document(doc), file=err)
        print(f"{len(violations)} violation(s) in {args.count} documents", file=out)
        return EXIT_INVALID
    print(f"0 violations in {args.count} documents", file=out)
    return EXIT_VALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cproof",
        description="Check soundness of cyclic induction pre-proofs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check one document")
    p.add_argument("file")
    p.add_argument("--method", choices=("poly", "buchi", "both"), default="poly")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("explain", help="print per-path traces and comparisons")
    p.add_argument("file")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("dot", help="export the normalized digraph as DOT")
    p.add_argument("file")
    p.add_argument("out")
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("bench", help="time both methods on a generated family")
    p.add_argument("--family", default="chained-cycles")
    p.add_argument("--sizes", default="10,20,30,40,50")
    p.add_argument("--oracle-timeout", type=float, default=10.0)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("fuzz", help="cross-check both methods on random documents")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-nodes", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_fuzz)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
