import random

from cproof.analysis import rb_paths, sccs
from cproof.checker import CheckConfig, analyze
from cproof.measures import infer_measures, refine_measures
from cproof.normalize import normalize, root_digraph
from cproof.ordering import trace_multiset_less
from cproof.traces import TraceContext, trace_summary


def pipeline(doc):
    nd = normalize(doc.preproof)
    part = sccs(root_digraph(nd))
    paths = rb_paths(nd, part)
    ctx = TraceContext(nd.nodes, doc.system, nd.induction_fn)
    summaries = {(p.root, p.bud): trace_summary(p, ctx) for p in paths}
    return nd, paths, summaries


def comparer(summaries):
    def valid(path, ma):
        return trace_multiset_less(path, summaries[(path.root, path.bud)],
                                   ma.per_root[path.root],
                                   ma.per_root[path.companion]).valid
    return valid


class TestInferMeasures:
    def test_two_hydra_root_measure(self, hydra_doc):
        nd, paths, summaries = pipeline(hydra_doc)
        ma = infer_measures(nd, paths, summaries)
        assert ma.per_root[0].items == (1, 2)

    def test_acyclic_measures_empty(self, acyclic_doc):
        nd, paths, summaries = pipeline(acyclic_doc)
        ma = infer_measures(nd, paths, summaries)
        assert all(m.items == () for m in ma.per_root.values())

    def test_stuttering_measure(self, stutter_doc):
        nd, paths, summaries = pipeline(stutter_doc)
        ma = infer_measures(nd, paths, summaries)
        assert ma.per_root[0].items == (1,)

    def test_order_independence(self, hydra_doc, two_root_doc):
        for doc in (hydra_doc, two_root_doc):
            nd, paths, summaries = pipeline(doc)
            baseline = infer_measures(nd, paths, summaries)
            rng = random.Random(11)
            for _ in range(4):
                shuffled = list(paths)
                rng.shuffle(shuffled)
                assert infer_measures(nd, shuffled, summaries) == baseline

    def test_additions_are_set_like(self, hydra_doc):
        # three paths all witness the same two indices; no duplicates appear
        nd, paths, summaries = pipeline(hydra_doc)
        ma = infer_measures(nd, paths, summaries)
        items = ma.per_root[0].items
        assert len(items) == len(set(items))


class TestRefineMeasures:
    def test_passing_assignment_is_fixpoint(self, hydra_doc):
        nd, paths, summaries = pipeline(hydra_doc)
        ma = infer_measures(nd, paths, summaries)
        refined = refine_measures(nd, paths, summaries, ma, comparer(summaries))
        assert refined == ma

    def test_two_root_duplication_cascade(self, two_root_doc):
        nd, paths, summaries = pipeline(two_root_doc)
        ma = infer_measures(nd, paths, summaries)
        valid = comparer(summaries)
        # the narrow root's path fails at first
        assert ma.per_root[0].items == (1, 2)
        assert ma.per_root[2].items == (1,)
        failing = [p for p in paths if not valid(p, ma)]
        assert [(p.root, p.bud) for p in failing] == [(2, 5)]
        refined = refine_measures(nd, paths, summaries, ma, valid)
        assert refined.per_root[2].items == (1, 1)
        assert refined.per_root[0].items == (1, 1, 2)
        assert all(valid(p, refined) for p in paths)

    def test_monotone_growth(self, two_root_doc, stutter_doc):
        for doc in (two_root_doc, stutter_doc):
            nd, paths, summaries = pipeline(doc)
            ma = infer_measures(nd, paths, summaries)
            refined = refine_measures(nd, paths, summaries, ma, comparer(summaries))
            for root, measure in ma.per_root.items():
                before = list(measure.items)
                after = list(refined.per_root[root].items)
                for idx in set(before):
                    assert after.count(idx) >= before.count(idx)

    def test_cap_bounds_growth(self, stutter_doc):
        nd, paths, summaries = pipeline(stutter_doc)
        ma = infer_measures(nd, paths, summaries)
        refined = refine_measures(nd, paths, summaries, ma, comparer(summaries),
                                  cap_factor=2)
        # the stuttering loop can never pass; refinement stops at the cap
        assert len(refined.per_root[0].items) <= 2 * len(
            nd.nodes[0].sequent.antecedent)
        assert not all(comparer(summaries)(p, refined) for p in paths)

    def test_absent_indices_are_tried_before_duplication(self):
        # a self-loop that only stutters on index 1: inference leaves index 2
        # out, refinement reaches for it first, and the loop stays failing
        # because the companion is the root itself, so both measure sides
        # grow together
        from cproof.core import (Atom, Backlink, Generic, Node, PreProof,
                                 TracePair, sequent, var)
        from cproof.families import fuzz_system
        from cproof.proof_format import ProofDocument
        n = lambda t: Atom("N", (t,))
        seq = sequent([(1, n(var("x"))), (2, n(var("y")))], [Atom("t")])
        shuffle = Generic("shuffle", ((TracePair(1, 1, False),),))
        nodes = {
            0: Node(seq, shuffle, (1,)),
            1: Node(seq, Backlink(0), ()),
        }
        doc = ProofDocument(fuzz_system(), PreProof(nodes, 0, {1: 0}),
                            {"name": "shuffle"})
        nd, paths, summaries = pipeline(doc)
        ma = infer_measures(nd, paths, summaries)
        assert ma.per_root[0].items == (1,)
        valid = comparer(summaries)
        assert not valid(paths[0], ma)
        # with room for a single addition, the absent index is the one taken
        tight = refine_measures(nd, paths, summaries, ma, valid, cap_factor=1)
        assert tight.per_root[0].items == (1, 2)
        # with the default cap the loop still cannot pass and stops bounded
        refined = refine_measures(nd, paths, summaries, ma, valid)
        assert 2 in refined.per_root[0].items
        assert len(refined.per_root[0].items) <= 4
        assert not valid(paths[0], refined)

    def test_analyze_marks_refinement(self, two_root_doc, hydra_doc):
        assert analyze(two_root_doc, CheckConfig()).refined
        assert not analyze(hydra_doc, CheckConfig()).refined
