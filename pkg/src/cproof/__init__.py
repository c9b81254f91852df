"""Soundness checking for cyclic induction pre-proofs.

The polynomial pipeline lives in `checker` (normalize, component analysis,
trace summaries, measure inference, per-path ordering test); the classical
automaton-inclusion check lives in `oracle`. Documents are parsed and
serialized by `proof_format`, and `corpus` ships worked examples including
the two-hydra pre-proof.
"""

from .core import (
    Atom,
    IAA,
    InductiveSystem,
    Node,
    PreProof,
    Production,
    Sequent,
    Term,
    TracePair,
    WellFormednessError,
    app,
    sequent,
    step_trace_pairs,
    validate_preproof,
    var,
)
from .proof_format import (
    ParseError,
    ProofDocument,
    SemanticError,
    parse_document,
    serialize_document,
)
from .corpus import builtin_corpus
from .normalize import NormalizedDigraph, RootDigraph, normalize, root_digraph
from .analysis import RootBudPath, SccPartition, rb_paths, sccs
from .traces import Trace, TraceContext, trace_summary, traces_along
from .measures import Measure, MeasureAssignment, infer_measures, refine_measures
from .ordering import BaseOrder, PathComparison, multiset_less, trace_multiset_less
from .checker import (
    Certificate,
    CheckConfig,
    Verdict,
    analyze,
    check_poly,
    parse_certificate,
    serialize_certificate,
    verify_certificate,
)
from .oracle import (
    BoundExceeded,
    BuchiAutomaton,
    Lasso,
    OracleTimeout,
    OracleVerdict,
    buchi_inclusion,
    check_buchi,
    path_automaton,
    trace_automaton,
    ultimately_periodic_member,
)

__all__ = [
    "Atom", "IAA", "InductiveSystem", "Node", "PreProof", "Production",
    "Sequent", "Term", "TracePair", "WellFormednessError", "app", "sequent",
    "step_trace_pairs", "validate_preproof",
    "ParseError", "ProofDocument", "SemanticError", "parse_document",
    "serialize_document", "builtin_corpus",
    "NormalizedDigraph", "RootDigraph", "normalize", "root_digraph",
    "RootBudPath", "SccPartition", "rb_paths", "sccs",
    "Trace", "TraceContext", "trace_summary", "traces_along",
    "Measure", "MeasureAssignment", "infer_measures", "refine_measures",
    "BaseOrder", "PathComparison", "multiset_less", "trace_multiset_less",
    "Certificate", "CheckConfig", "Verdict", "analyze", "check_poly",
    "parse_certificate", "serialize_certificate", "verify_certificate",
    "BoundExceeded", "BuchiAutomaton", "Lasso", "OracleTimeout",
    "OracleVerdict", "buchi_inclusion", "check_buchi", "path_automaton",
    "trace_automaton", "ultimately_periodic_member",
]
