"""Normalization tests, anchored by a brute-force path-set comparison.

Crossing a back-link created by splitting inserts the copied root right
after the bud it replaced; since the copy renames back to the same source
node, collapsing consecutive duplicates after renaming recovers the original
step sequences. The oracle below enumerates bounded paths on both sides and
compares the collapsed sets.
"""

from cproof.core import (
    Atom,
    AxiomRule,
    Backlink,
    Node,
    PreProof,
    RUnf,
    sequent,
    subst_rule,
    validate_preproof,
    var,
)
from cproof.families import fuzz_system
from cproof.normalize import normalize, preproof_digraph, root_digraph
from conftest import make_random_docs

K = 8


def bounded_paths(g, start, max_len):
    succ = g.successors()
    out = set()
    stack = [(start,)]
    while stack:
        path = stack.pop()
        out.add(path)
        if len(path) > max_len:
            continue
        for nxt in succ[path[-1]]:
            stack.append(path + (nxt,))
    return {p for p in out if len(p) <= max_len + 1}


def collapse(path):
    out = [path[0]]
    for x in path[1:]:
        if x != out[-1]:
            out.append(x)
    return tuple(out)


def assert_path_equivalent(pp):
    nd = normalize(pp)
    before = bounded_paths(preproof_digraph(pp), pp.root, K)
    # a collapsed path of length <= K comes from a raw path of length <= 2K
    raw_after = bounded_paths(root_digraph(nd), nd.original_root, 2 * K)
    ren = nd.renaming
    mapped = {collapse(tuple(ren.get(n, n) for n in p)) for p in raw_after}
    mapped = {p for p in mapped if len(p) <= K + 1}
    assert mapped == before


def interior_companion_doc():
    """The companion sits two levels below the root."""
    t = Atom("t")
    x = var("x")
    nat = lambda u: Atom("N", (u,))
    seq = sequent([(1, nat(x))], [t])
    nodes = {
        0: Node(seq, RUnf(0, 3), (1,)),
        1: Node(seq, RUnf(0, 3), (2,)),
        2: Node(seq, RUnf(0, 3), (3,)),
        3: Node(seq, subst_rule({}), (4,)),
        4: Node(seq, Backlink(2), ()),
    }
    return PreProof(nodes, 0, {4: 2})


class TestNormalize:
    def test_two_hydra_already_normalized(self, hydra_doc):
        nd = normalize(hydra_doc.preproof)
        assert nd.roots == (0,)
        assert nd.renaming == {}
        assert nd.nodes == hydra_doc.preproof.nodes
        assert nd.induction_fn == hydra_doc.preproof.induction_fn

    def test_acyclic_single_tree(self, acyclic_doc):
        nd = normalize(acyclic_doc.preproof)
        assert nd.roots == (0,)
        assert nd.induction_fn == {}

    def test_interior_companion_is_split(self):
        pp = interior_companion_doc()
        assert validate_preproof(pp, fuzz_system()) == []
        nd = normalize(pp)
        assert len(nd.roots) == 2
        # every companion is now a root
        assert set(nd.induction_fn.values()) <= set(nd.roots)
        # the old occurrence became a bud
        assert isinstance(nd.nodes[2].rule, Backlink)
        assert nd.nodes[2].premises == ()
        assert_path_equivalent(pp)

    def test_sequent_labels_preserved(self):
        pp = interior_companion_doc()
        nd = normalize(pp)
        for new, old in nd.renaming.items():
            assert nd.nodes[new].sequent == pp.nodes[old].sequent

    def test_idempotent_up_to_ids(self, corpus_docs):
        for doc in corpus_docs:
            nd = normalize(doc.preproof)
            again = normalize(PreProof(nd.nodes, nd.original_root, nd.induction_fn))
            assert again.nodes == nd.nodes
            assert again.induction_fn == nd.induction_fn
            assert again.renaming == {}

    def test_shared_companion_yields_one_new_root(self):
        from cproof.core import Generic, TracePair
        t = Atom("t")
        x = var("x")
        nat = lambda u: Atom("N", (u,))
        seq = sequent([(1, nat(x))], [t])
        fork = Generic("fork", ((TracePair(1, 1, False),), (TracePair(1, 1, False),)))
        nodes = {
            0: Node(seq, RUnf(0, 3), (1,)),
            1: Node(seq, fork, (2, 3)),  # interior companion of two buds
            2: Node(seq, Backlink(1), ()),
            3: Node(seq, Backlink(1), ()),
        }
        pp = PreProof(nodes, 0, {2: 1, 3: 1})
        assert validate_preproof(pp, fuzz_system()) == []
        nd = normalize(pp)
        assert len(nd.roots) == 2
        new_root = nd.induction_fn[1]
        assert new_root != 1 and new_root in nd.roots
        assert set(nd.induction_fn.values()) == {new_root}
        assert_path_equivalent(pp)

    def test_corpus_path_equivalence(self, corpus_docs):
        for doc in corpus_docs:
            assert_path_equivalent(doc.preproof)

    def test_random_documents_path_equivalence(self):
        for doc in make_random_docs(60, seed=77):
            assert_path_equivalent(doc.preproof)


class TestRootDigraph:
    def test_two_hydra_counts(self, hydra_doc):
        g = root_digraph(normalize(hydra_doc.preproof))
        assert len(g.vertices) == 28
        premise_edges = [e for e in g.edges if e not in
                         set(normalize(hydra_doc.preproof).induction_fn.items())]
        assert len(g.edges) == 30  # 27 premise edges + 3 back-links
        assert len(premise_edges) == 27

    def test_single_closed_node(self):
        pp = PreProof({0: Node(sequent([], [Atom("t")]), AxiomRule(), ())}, 0, {})
        g = root_digraph(normalize(pp))
        assert g.vertices == (0,)
        assert g.edges == ()

    def test_stuttering_cycle_length_two(self, stutter_doc):
        g = root_digraph(normalize(stutter_doc.preproof))
        assert set(g.edges) == {(0, 1), (1, 0)}
