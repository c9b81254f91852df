"""End-to-end validity check and replayable certificates.

The pipeline normalizes the pre-proof, enumerates root-to-bud paths inside
cyclic components, infers measures, refines them on failure and compares the
two ends of every path. The verdict is Valid or Unknown: the ordering test is
a sufficient condition, so a failed comparison never proves unsoundness.
Valid verdicts carry a certificate whose every claim can be replayed without
re-running the inference heuristics.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .analysis import RootBudPath, SccPartition, rb_paths, sccs
from .core import validate_preproof
from .measures import MeasureAssignment, infer_measures, refine_measures
from .normalize import NormalizedDigraph, normalize, root_digraph
from .ordering import PathComparison, trace_multiset_less
from .proof_format import ProofDocument, SemanticError
from .traces import TraceContext, trace_summary, traces_along


@dataclass(frozen=True)
class CheckConfig:
    cap_factor: int = 2
    refine: bool = True


@dataclass(frozen=True)
class PathCertificate:
    root: int
    bud: int
    companion: int
    nodes: tuple[int, ...]
    matching: tuple[tuple[int, int, bool], ...]  # (bud index, root index, progressing)
    witnesses: tuple[tuple[int, int, bool, tuple[tuple[int, int], ...]], ...]


@dataclass(frozen=True)
class Certificate:
    document: str
    roots: tuple[int, ...]
    node_count: int
    buds: tuple[tuple[int, int], ...]
    components: tuple[tuple[int, ...], ...]
    cyclic: tuple[bool, ...]
    measures: tuple[tuple[int, tuple[int, ...]], ...]
    paths: tuple[PathCertificate, ...]


@dataclass(frozen=True)
class Verdict:
    status: str  # "Valid" | "Unknown"
    certificate: Optional[Certificate] = None
    reason: Optional[str] = None


@dataclass(frozen=True)
class PolyAnalysis:
    """Everything the pipeline computed, for reporting and certificates."""

    digraph: NormalizedDigraph
    partition: SccPartition
    paths: list[RootBudPath]
    summaries: dict[tuple[int, int], set[tuple[int, int, bool]]]
    measures: MeasureAssignment
    comparisons: list[PathComparison]
    refined: bool


def analyze(doc: ProofDocument, config: CheckConfig = CheckConfig()) -> PolyAnalysis:
    errors = validate_preproof(doc.preproof, doc.system)
    if errors:
        raise SemanticError(errors)
    nd = normalize(doc.preproof)
    part = sccs(root_digraph(nd))
    paths = rb_paths(nd, part)
    ctx = TraceContext(nd.nodes, doc.system, nd.induction_fn)
    summaries = {(p.root, p.bud): trace_summary(p, ctx) for p in paths}

    ma = infer_measures(nd, paths, summaries)

    def compare(path: RootBudPath, assignment: MeasureAssignment) -> PathComparison:
        return trace_multiset_less(path, summaries[(path.root, path.bud)],
                                   assignment.per_root[path.root],
                                   assignment.per_root[path.companion])

    refined = False
    if config.refine and any(not compare(p, ma).valid for p in paths):
        ma = refine_measures(nd, paths, summaries, ma,
                             lambda p, a: compare(p, a).valid,
                             cap_factor=config.cap_factor)
        refined = True
    comparisons = [compare(p, ma) for p in paths]
    return PolyAnalysis(nd, part, paths, summaries, ma, comparisons, refined)


def verdict_from_analysis(doc: ProofDocument, analysis: PolyAnalysis) -> Verdict:
    failing = [c for c in analysis.comparisons if not c.valid]
    if failing:
        bad = failing[0].path
        return Verdict("Unknown",
                       reason=f"comparison failed along path {bad.root} to {bad.bud}")
    return Verdict("Valid", certificate=_build_certificate(doc, analysis))


def check_poly(doc: ProofDocument, config: CheckConfig = CheckConfig()) -> Verdict:
    return verdict_from_analysis(doc, analyze(doc, config))


def _build_certificate(doc: ProofDocument, analysis: PolyAnalysis) -> Certificate:
    nd = analysis.digraph
    ctx = TraceContext(nd.nodes, doc.system, nd.induction_fn)
    path_certs = []
    for comp in analysis.comparisons:
        path = comp.path
        needed = sorted({(r, b, flag) for b, r, flag in comp.matching})
        witnesses = []
        all_traces = traces_along(path, ctx)
        for r, b, flag in needed:
            for t in all_traces:
                if t.root_index == r and t.bud_index == b and t.progressing == flag:
                    witnesses.append((r, b, flag, t.occurrences))
                    break
        path_certs.append(PathCertificate(
            path.root, path.bud, path.companion, path.nodes,
            comp.matching, tuple(witnesses)))
    return Certificate(
        document=doc.name,
        roots=nd.roots,
        node_count=len(nd.nodes),
        buds=tuple(sorted(nd.induction_fn.items())),
        components=analysis.partition.components,
        cyclic=analysis.partition.cyclic,
        measures=tuple(sorted((r, m.items) for r, m in analysis.measures.per_root.items())),
        paths=tuple(path_certs),
    )


# ---------------------------------------------------------------------------
# Certificate replay


def certificate_failure(doc: ProofDocument, cert: Certificate) -> Optional[str]:
    """First claim in the certificate that does not replay, or None."""
    errors = validate_preproof(doc.preproof, doc.system)
    if errors:
        return f"document invalid: {errors[0]}"
    nd = normalize(doc.preproof)
    if tuple(cert.roots) != nd.roots:
        return "root set differs from the normalized digraph"
    if cert.node_count != len(nd.nodes):
        return "node count differs from the normalized digraph"
    if dict(cert.buds) != nd.induction_fn:
        return "back-link map differs from the normalized digraph"
    part = sccs(root_digraph(nd))
    if tuple(cert.components) != part.components or tuple(cert.cyclic) != part.cyclic:
        return "component partition differs"

    measures = dict(cert.measures)
    if set(measures) != set(nd.roots):
        return "measures are not assigned to exactly the roots"
    for r, items in measures.items():
        allowed = set(nd.nodes[r].sequent.indices())
        if not set(items) <= allowed:
            return f"measure of root {r} uses indices outside its antecedent"

    paths = rb_paths(nd, part)
    ctx = TraceContext(nd.nodes, doc.system, nd.induction_fn)
    by_key = {(p.root, p.bud): p for p in paths}
    if {(pc.root, pc.bud) for pc in cert.paths} != set(by_key):
        return "certificate paths differ from the cyclic-component paths"

    for pc in cert.paths:
        path = by_key[(pc.root, pc.bud)]
        if pc.companion != path.companion or tuple(pc.nodes) != path.nodes:
            return f"path {pc.root} to {pc.bud}: shape differs"
        witness_ok = _check_witnesses(ctx, path, pc)
        if witness_ok is not None:
            return f"path {pc.root} to {pc.bud}: {witness_ok}"
        arith = _check_matching(measures, pc)
        if arith is not None:
            return f"path {pc.root} to {pc.bud}: {arith}"
    return None


def _check_witnesses(ctx: TraceContext, path: RootBudPath,
                     pc: PathCertificate) -> Optional[str]:
    available = {(r, b, flag) for r, b, flag, _ in pc.witnesses}
    for b, r, flag in pc.matching:
        if (r, b, flag) not in available:
            return f"no witness trace for link {r} -> {b} ({flag})"
    for r, b, flag, occs in pc.witnesses:
        if len(occs) != len(path.nodes):
            return "witness trace length differs from the path"
        if tuple(n for n, _ in occs) != path.nodes:
            return "witness trace does not follow the path"
        if occs[0][1] != r or occs[-1][1] != b:
            return "witness trace endpoints differ from its link"
        # a step may offer the same index pair with both flags (declared
        # rules); the claimed flag must be achievable by some choice
        can_progress = False
        all_steps_can_stay_flat = True
        for k in range(len(occs) - 1):
            here, there = path.nodes[k], path.nodes[k + 1]
            position = ctx.nodes[here].premises.index(there)
            pairs = ctx.step_pairs(here, position)
            flags = {tp.progressing for tp in pairs
                     if tp.conclusion_index == occs[k][1]
                     and tp.premise_index == occs[k + 1][1]}
            if not flags:
                return f"witness step {k} is not a trace pair of the inference"
            if True in flags:
                can_progress = True
            if False not in flags:
                all_steps_can_stay_flat = False
        achievable = can_progress if flag else all_steps_can_stay_flat
        if not achievable:
            return "witness trace progress flag does not replay"
    return None


def _check_matching(measures: dict[int, tuple[int, ...]],
                    pc: PathCertificate) -> Optional[str]:
    root_items = Counter(measures[pc.root])
    bud_items = Counter(measures[pc.companion])
    cancelled = [(b, r) for b, r, flag in pc.matching if not flag]
    coverage = [(b, r) for b, r, flag in pc.matching if flag]
    for b, r in cancelled:
        if bud_items[b] <= 0 or root_items[r] <= 0:
            return "cancellation consumes a missing measure item"
        bud_items[b] -= 1
        root_items[r] -= 1
    x_residue = +root_items
    y_residue = +bud_items
    if not x_residue:
        return "root residue is empty"
    covered = Counter(b for b, _ in coverage)
    if covered != y_residue:
        return "coverage does not match the bud residue"
    for b, r in coverage:
        if x_residue[r] <= 0:
            return "coverage uses a root item outside the residue"
    return None


def verify_certificate(doc: ProofDocument, cert: Certificate) -> bool:
    return certificate_failure(doc, cert) is None


# ---------------------------------------------------------------------------
# Certificate serialization (canonical, like proof documents)


def certificate_to_json(cert: Certificate) -> dict:
    return {
        "document": cert.document,
        "normalized": {
            "roots": list(cert.roots),
            "node_count": cert.node_count,
            "buds": {str(b): c for b, c in cert.buds},
        },
        "sccs": {
            "components": [list(c) for c in cert.components],
            "cyclic": list(cert.cyclic),
        },
        "measures": {str(r): list(items) for r, items in cert.measures},
        "paths": [
            {
                "root": pc.root,
                "bud": pc.bud,
                "companion": pc.companion,
                "nodes": list(pc.nodes),
                "matching": [[b, r, flag] for b, r, flag in pc.matching],
                "witnesses": [
                    {"root_index": r, "bud_index": b, "progressing": flag,
                     "occurrences": [[n, i] for n, i in occs]}
                    for r, b, flag, occs in pc.witnesses],
            }
            for pc in cert.paths],
    }


def certificate_from_json(j: dict) -> Certificate:
    return Certificate(
        document=j["document"],
        roots=tuple(j["normalized"]["roots"]),
        node_count=j["normalized"]["node_count"],
        buds=tuple(sorted((int(b), c) for b, c in j["normalized"]["buds"].items())),
        components=tuple(tuple(c) for c in j["sccs"]["components"]),
        cyclic=tuple(bool(c) for c in j["sccs"]["cyclic"]),
        measures=tuple(sorted((int(r), tuple(items)) for r, items in j["measures"].items())),
        paths=tuple(
            PathCertificate(
                p["root"], p["bud"], p["companion"], tuple(p["nodes"]),
                tuple((b, r, bool(f)) for b, r, f in p["matching"]),
                tuple((w["root_index"], w["bud_index"], bool(w["progressing"]),
                       tuple((n, i) for n, i in w["occurrences"]))
                      for w in p["witnesses"]),
            )
            for p in j["paths"]),
    )


def serialize_certificate(cert: Certificate) -> str:
    return json.dumps(certificate_to_json(cert), indent=2, sort_keys=True) + "\n"


def parse_certificate(text: str) -> Certificate:
    return certificate_from_json(json.loads(text))
