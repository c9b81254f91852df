"""Built-in example documents.

The two-hydra entry encodes the 28-node pre-proof that the battle against a
two-headed hydra terminates, for the goal N(x), N(y) |- p(x, y), with
back-links at nodes 13, 21 and 27, all pointing at the root. The other entries are small hand-built documents used throughout
the test suite: a proof that odd numbers are naturals, an unsound stuttering
cycle, an acyclic proof, and a two-root cycle whose measures need refinement.
"""

from __future__ import annotations

from .core import (
    Atom,
    AxiomRule,
    Backlink,
    IdRule,
    InductiveSystem,
    LUnf,
    Node,
    PreProof,
    Production,
    RUnf,
    Term,
    app,
    sequent,
    subst_rule,
    var,
    weaken,
    zero,
)
from .proof_format import ProofDocument


def _n(t: Term) -> Atom:
    return Atom("N", (t,))


def _p(a: Term, b: Term) -> Atom:
    return Atom("p", (a, b))


def _s(t: Term) -> Term:
    return app("s", t)


X, Y, Z, W = var("x"), var("y"), var("z"), var("w")
O_ = zero()


def nat_productions() -> list[Production]:
    return [
        Production((), _n(O_)),
        Production((_n(X),), _n(_s(X))),
    ]


def two_hydra_system() -> InductiveSystem:
    prods = nat_productions() + [
        Production((), _p(O_, O_)),
        Production((), _p(_s(O_), O_)),
        Production((), _p(X, _s(O_))),
        Production((_p(X, Y),), _p(_s(X), _s(_s(Y)))),
        Production((_p(_s(Y), Y),), _p(O_, _s(_s(Y)))),
        Production((_p(_s(X), X),), _p(_s(_s(X)), O_)),
    ]
    return InductiveSystem((("N", 1), ("p", 2)), tuple(prods))


# production ids in two_hydra_system
P_ZERO_ZERO = 2
P_ONE_ZERO = 3
P_ANY_ONE = 4
P_STEP_BOTH = 5
P_ZERO_SS = 6
P_SS_ZERO = 7


def two_hydra() -> ProofDocument:
    n = _n
    p = _p
    s = _s
    nodes: dict[int, Node] = {
        0: Node(sequent([(1, n(X)), (2, n(Y))], [p(X, Y)]), LUnf(2), (1, 14)),
        # case y = 0
        1: Node(sequent([(1, n(X)), (2, n(O_))], [p(X, O_)]), LUnf(1), (2, 5)),
        2: Node(sequent([(1, n(O_)), (2, n(O_))], [p(O_, O_)]), weaken({1: 1}), (3,)),
        3: Node(sequent([(1, n(O_))], [p(O_, O_)]), weaken({}), (4,)),
        4: Node(sequent([], [p(O_, O_)]), AxiomRule(), ()),
        5: Node(sequent([(1, n(Y)), (2, n(O_)), (4, n(s(Y)))], [p(s(Y), O_)]), LUnf(4), (6,)),
        6: Node(sequent([(1, n(Y)), (2, n(O_)), (4, n(Y))], [p(s(Y), O_)]), LUnf(4), (7, 10)),
        7: Node(sequent([(1, n(O_)), (2, n(O_)), (4, n(O_))], [p(s(O_), O_)]),
                weaken({1: 1}), (8,)),
        8: Node(sequent([(1, n(O_))], [p(s(O_), O_)]), weaken({}), (9,)),
        9: Node(sequent([], [p(s(O_), O_)]), AxiomRule(), ()),
        10: Node(sequent([(1, n(s(Z))), (2, n(O_)), (4, n(Z)), (5, n(s(Z)))],
                         [p(s(s(Z)), O_)]), RUnf(0, P_SS_ZERO), (11,)),
        11: Node(sequent([(1, n(s(Z))), (2, n(O_)), (4, n(Z)), (5, n(s(Z)))],
                         [p(s(Z), Z)]), weaken({1: 1, 4: 4}), (12,)),
        12: Node(sequent([(1, n(s(Z))), (4, n(Z))], [p(s(Z), Z)]),
                 subst_rule({"x": s(Z), "y": Z}), (13,)),
        13: Node(sequent([(1, n(X)), (2, n(Y))], [p(X, Y)]), Backlink(0), ()),
        # case y = s(z)
        14: Node(sequent([(1, n(X)), (2, n(Z)), (4, n(s(Z)))], [p(X, s(Z))]),
                 LUnf(1), (15, 22)),
        # case x = 0
        15: Node(sequent([(1, n(O_)), (2, n(Z)), (4, n(s(Z)))], [p(O_, s(Z))]),
                 LUnf(2), (16, 18)),
        16: Node(sequent([(1, n(O_)), (2, n(O_)), (4, n(s(O_)))], [p(O_, s(O_))]),
                 weaken({}), (17,)),
        17: Node(sequent([], [p(O_, s(O_))]), AxiomRule(), ()),
        18: Node(sequent([(1, n(O_)), (2, n(Y)), (4, n(s(s(Y)))), (5, n(s(Y)))],
                         [p(O_, s(s(Y)))]), RUnf(0, P_ZERO_SS), (19,)),
        19: Node(sequent([(1, n(O_)), (2, n(Y)), (4, n(s(s(Y)))), (5, n(s(Y)))],
                         [p(s(Y), Y)]), weaken({2: 2, 5: 1}), (20,)),
        20: Node(sequent([(1, n(s(Y))), (2, n(Y))], [p(s(Y), Y)]),
                 subst_rule({"x": s(Y)}), (21,)),
        21: Node(sequent([(1, n(X)), (2, n(Y))], [p(X, Y)]), Backlink(0), ()),
        # case x = s(y)
        22: Node(sequent([(1, n(Y)), (2, n(Z)), (4, n(s(Z))), (5, n(s(Y)))],
                         [p(s(Y), s(Z))]), LUnf(2), (23, 24)),
        23: Node(sequent([(1, n(Y)), (2, n(O_)), (4, n(s(O_))), (5, n(s(Y)))],
                         [p(s(Y), s(O_))]), AxiomRule(), ()),
        24: Node(sequent([(1, n(Y)), (2, n(W)), (4, n(s(s(W)))), (5, n(s(Y))), (6, n(s(W)))],
                         [p(s(Y), s(s(W)))]), RUnf(0, P_STEP_BOTH), (25,)),
        25: Node(sequent([(1, n(Y)), (2, n(W)), (4, n(s(s(W)))), (5, n(s(Y))), (6, n(s(W)))],
                         [p(Y, W)]), weaken({1: 1, 2: 2}), (26,)),
        26: Node(sequent([(1, n(Y)), (2, n(W))], [p(Y, W)]),
                 subst_rule({"x": Y, "y": W}), (27,)),
        27: Node(sequent([(1, n(X)), (2, n(Y))], [p(X, Y)]), Backlink(0), ()),
    }
    pp = PreProof(nodes, 0, {13: 0, 21: 0, 27: 0})
    meta = {
        "name": "2-hydra",
        "source": "two-headed hydra termination goal",
        "nodes": "28",
        "backlinks": "3",
        "depth": "4",
        "note": "a non-optimised rendering carries one extra weakening and numbers the last bud 28",
    }
    return ProofDocument(two_hydra_system(), pp, meta)


def two_hydra_unoptimized() -> ProofDocument:
    """The same pre-proof with one extra weakening in the deepest closure.

    This is the 29-node rendering whose last bud is numbered 28, the shape
    an unoptimised prover run prints.
    """
    base = two_hydra()
    nodes = dict(base.preproof.nodes)
    seq23 = nodes[23].sequent
    shifted = {nid: Node(node.sequent, node.rule,
                         tuple(p + 1 if p >= 24 else p for p in node.premises))
               for nid, node in nodes.items()}
    moved = {nid if nid < 24 else nid + 1: node for nid, node in shifted.items()}
    moved[23] = Node(seq23, weaken({}), (24,))
    moved[24] = Node(sequent([], list(seq23.consequent)), AxiomRule(), ())
    pp = PreProof(moved, 0, {13: 0, 21: 0, 28: 0})
    meta = dict(base.metadata)
    meta.update({"name": "2-hydra-unoptimized", "nodes": "29",
                 "note": "the cleaned rendering closes node 23 directly and numbers the bud 27"})
    return ProofDocument(base.system, pp, meta)


def odd_nat_system() -> InductiveSystem:
    e = lambda t: Atom("E", (t,))
    o = lambda t: Atom("O", (t,))
    prods = nat_productions() + [
        Production((), e(O_)),
        Production((o(X),), e(_s(X))),
        Production((e(X),), o(_s(X))),
    ]
    return InductiveSystem((("N", 1), ("E", 1), ("O", 1)), tuple(prods))


def odd_implies_nat() -> ProofDocument:
    n = _n
    s = _s
    e = lambda t: Atom("E", (t,))
    o = lambda t: Atom("O", (t,))
    x1, y1 = var("x1"), var("y1")
    nodes: dict[int, Node] = {
        0: Node(sequent([(1, o(X))], [n(X)]), LUnf(1), (1,)),
        1: Node(sequent([(1, e(x1)), (4, o(s(x1)))], [n(s(x1))]), RUnf(0, 1), (2,)),
        2: Node(sequent([(1, e(x1)), (4, o(s(x1)))], [n(x1)]), LUnf(1), (3, 5)),
        3: Node(sequent([(1, e(O_)), (4, o(s(O_)))], [n(O_)]), weaken({}), (4,)),
        4: Node(sequent([], [n(O_)]), AxiomRule(), ()),
        5: Node(sequent([(1, o(y1)), (4, o(s(s(y1))))], [n(s(y1))]), RUnf(0, 1), (6,)),
        6: Node(sequent([(1, o(y1)), (4, o(s(s(y1))))], [n(y1)]), weaken({1: 1}), (7,)),
        7: Node(sequent([(1, o(y1))], [n(y1)]), subst_rule({"x": y1}), (8,)),
        8: Node(sequent([(1, o(X))], [n(X)]), Backlink(0), ()),
    }
    pp = PreProof(nodes, 0, {8: 0})
    meta = {
        "name": "odd-implies-nat",
        "source": "hand-built proof that odd numbers are naturals",
        "nodes": "9",
        "backlinks": "1",
        "depth": "2",
    }
    return ProofDocument(odd_nat_system(), pp, meta)


def goal_system() -> InductiveSystem:
    """Naturals plus a trivially provable goal predicate."""
    prods = nat_productions() + [Production((), Atom("t"))]
    return InductiveSystem((("N", 1), ("t", 0)), tuple(prods))


def stuttering() -> ProofDocument:
    t = Atom("t")
    nodes = {
        0: Node(sequent([(1, _n(X))], [t]), subst_rule({}), (1,)),
        1: Node(sequent([(1, _n(X))], [t]), Backlink(0), ()),
    }
    pp = PreProof(nodes, 0, {1: 0})
    meta = {
        "name": "stuttering",
        "source": "unsound back-link over a stuttering step",
        "nodes": "2",
        "backlinks": "1",
    }
    return ProofDocument(goal_system(), pp, meta)


def acyclic() -> ProofDocument:
    n = _n
    s = _s
    sys = InductiveSystem((("N", 1),), tuple(nat_productions()))
    nodes = {
        0: Node(sequent([(1, n(X))], [n(X)]), LUnf(1), (1, 2)),
        1: Node(sequent([(1, n(O_))], [n(O_)]), IdRule(), ()),
        2: Node(sequent([(1, n(Y)), (4, n(s(Y)))], [n(s(Y))]), IdRule(), ()),
    }
    pp = PreProof(nodes, 0, {})
    meta = {
        "name": "acyclic",
        "source": "case split closed by identity on both branches",
        "nodes": "3",
        "backlinks": "0",
    }
    return ProofDocument(sys, pp, meta)


def two_root() -> ProofDocument:
    """Two mutually linked trees whose inferred measures need refinement.

    The path out of the wide root only stutters, so the comparison for the
    opposite path fails until item copies are added to both measures.
    """
    n = _n
    s = _s
    t = Atom("t")
    nodes = {
        0: Node(sequent([(1, n(X)), (2, n(Y))], [t]), weaken({1: 1}), (1,)),
        1: Node(sequent([(1, n(X))], [t]), Backlink(2), ()),
        2: Node(sequent([(1, n(X))], [t]), LUnf(1), (3, 4)),
        3: Node(sequent([(1, n(O_))], [t]), AxiomRule(), ()),
        4: Node(sequent([(1, n(Z)), (4, n(s(Z)))], [t]),
                subst_rule({"x": Z, "y": s(Z)}), (5,)),
        5: Node(sequent([(1, n(X)), (2, n(Y))], [t]), Backlink(0), ()),
    }
    pp = PreProof(nodes, 0, {1: 2, 5: 0})
    meta = {
        "name": "two-root",
        "source": "hand-built two-root cycle exercising measure refinement",
        "nodes": "6",
        "backlinks": "2",
    }
    return ProofDocument(goal_system(), pp, meta)


def builtin_corpus() -> list[ProofDocument]:
    """All shipped example documents, in a fixed order."""
    return [two_hydra(), two_hydra_unoptimized(), odd_implies_nat(),
            stuttering(), acyclic(), two_root()]
