"""Document generators: the benchmark family and random well-formed proofs."""

from __future__ import annotations

import random

from .core import (
    Atom,
    AxiomRule,
    Backlink,
    InductiveSystem,
    LUnf,
    Node,
    PreProof,
    Production,
    RUnf,
    Sequent,
    Term,
    app,
    sequent,
    subst_rule,
    validate_preproof,
    var,
    weaken,
    zero,
)
from .proof_format import ProofDocument


def _n(t: Term) -> Atom:
    return Atom("N", (t,))


def _s(t: Term) -> Term:
    return app("s", t)


# ---------------------------------------------------------------------------
# Benchmark family: a ring of small trees, one progressing trace each


def ring_system() -> InductiveSystem:
    x = var("x")
    q0 = Atom("q", (zero(),))
    prods = (
        Production((), _n(zero())),
        Production((_n(x),), _n(_s(x))),
        Production((), q0),
        Production((Atom("q", (x,)),), Atom("q", (_s(x),))),
    )
    return InductiveSystem((("N", 1), ("q", 1)), prods)


def chained_cycles(size: int) -> ProofDocument:
    """A ring of five-node trees; bud i backs onto the root of tree i+1.

    `size` counts nodes. Each tree checks with one progressing trace (plus
    two carried stutter atoms), so the polynomial method stays linear in the
    ring while the automaton side grows several trace states per node and
    its profile monoid grows with the ring circumference.
    """
    trees = max(1, size // 5)
    q = lambda t: Atom("q", (t,))
    x, y, w, z = var("x"), var("y"), var("w"), var("z")
    carried = [(2, _n(y)), (3, _n(w))]
    nodes: dict[int, Node] = {}
    buds: dict[int, int] = {}
    for i in range(trees):
        base = 5 * i
        target = 5 * ((i + 1) % trees)
        nodes[base] = Node(sequent([(1, _n(x))] + carried, [q(x)]),
                           LUnf(1), (base + 1, base + 2))
        nodes[base + 1] = Node(sequent([(1, _n(zero()))] + carried, [q(zero())]),
                               AxiomRule(), ())
        nodes[base + 2] = Node(sequent([(1, _n(z))] + carried, [q(_s(z))]),
                               RUnf(0, 3), (base + 3,))
        nodes[base + 3] = Node(sequent([(1, _n(z))] + carried, [q(z)]),
                               subst_rule({"x": z}), (base + 4,))
        nodes[base + 4] = Node(sequent([(1, _n(x))] + carried, [q(x)]),
                               Backlink(target), ())
        buds[base + 4] = target
    pp = PreProof(nodes, 0, buds)
    meta = {"name": f"chained-cycles-{trees}", "source": "benchmark family",
            "nodes": str(len(nodes)), "backlinks": str(len(buds))}
    return ProofDocument(ring_system(), pp, meta)


# ---------------------------------------------------------------------------
# Random well-formed pre-proofs


def fuzz_system() -> InductiveSystem:
    t = Atom("t")
    x = var("x")
    prods = (
        Production((), _n(zero())),
        Production((_n(x),), _n(_s(x))),
        Production((), t),
        Production((t,), t),
    )
    return InductiveSystem((("N", 1), ("t", 0)), prods)


T_SELF = 3  # production id of "t from t" in fuzz_system
GOAL = Atom("t")

_VARS = ("x", "y", "w")


class _Builder:
    def __init__(self) -> None:
        self.nodes: dict[int, Node] = {}
        self.buds: dict[int, int] = {}
        self.next_id = 0

    def reserve(self) -> int:
        nid = self.next_id
        self.next_id += 1
        return nid

    def place(self, nid: int, seq: Sequent, rule, premises: tuple[int, ...] = ()) -> None:
        self.nodes[nid] = Node(seq, rule, premises)


def _pattern_sequent(indices: list[int]) -> Sequent:
    return sequent([(idx, _n(var(_VARS[k]))) for k, idx in enumerate(indices)], [GOAL])


def _fresh_var(seq: Sequent) -> str:
    taken = seq.variables()
    for base in ("z", "u", "v"):
        if base not in taken:
            return base
    k = 0
    while f"z{k}" in taken:
        k += 1
    return f"z{k}"


def _grow_path(b: _Builder, rng: random.Random, start_id: int, start_seq: Sequent,
               steps: int, allow_progress: bool, min_atoms: int,
               stutter_hangoff: bool = False) -> tuple[int, Sequent]:
    """Apply `steps` random rules below the reserved node `start_id`.

    Returns the id (reserved, not yet placed) and sequent of the open end.
    The antecedent never shrinks below `min_atoms`.
    """
    pending = start_id
    cur = start_seq
    hangoff_done = not stutter_hangoff

    for _ in range(steps):
        var_targets = [it.index for it in cur.antecedent if it.atom.args[0].kind == "var"]
        sforms = [it.index for it in cur.antecedent
                  if it.atom.args[0].kind == "app" and it.atom.args[0].symbol == "s"]
        pool = ["runf", "subst"]
        if allow_progress and var_targets:
            pool += ["lunf", "lunf"]
        if sforms:
            pool.append("sform")
        if len(cur.antecedent) > min_atoms:
            pool.append("drop")
        kind = rng.choice(pool)

        if kind == "lunf":
            idx = rng.choice(var_targets)
            v = cur.atom_at(idx).args[0].symbol
            fresh = _fresh_var(cur)
            zero_items = [(it.index, it.atom.apply({v: zero()})) for it in cur.antecedent]
            if rng.random() < 0.5:
                zero_items = [(i, a) for i, a in zero_items if i != idx]
            succ_items = []
            for it in cur.antecedent:
                if it.index == idx:
                    succ_items.append((idx, _n(var(fresh))))
                else:
                    succ_items.append((it.index, it.atom.apply({v: _s(var(fresh))})))
            if rng.random() < 0.4 and len(succ_items) < 4:
                free = min(set(range(1, 10)) - {i for i, _ in succ_items})
                succ_items.append((free, _n(_s(var(fresh)))))
            zero_seq = sequent(zero_items, list(cur.consequent))
            succ_seq = sequent(succ_items, list(cur.consequent))
            zero_id = b.reserve()
            succ_id = b.reserve()
            b.place(pending, cur, LUnf(idx), (zero_id, succ_id))
            if hangoff_done or not zero_seq.antecedent:
                b.place(zero_id, zero_seq, AxiomRule())
            else:
                # hang an interior cycle off the zero branch: its companion
                # is not a tree root, so normalization has work to do
                stut = b.reserve()
                b.place(zero_id, zero_seq, RUnf(0, T_SELF), (stut,))
                b.place(stut, zero_seq, Backlink(zero_id))
                b.buds[stut] = zero_id
                hangoff_done = True
            pending = succ_id
            cur = succ_seq
        elif kind == "sform":
            idx = rng.choice(sforms)
            reduct = cur.atom_at(idx).args[0].args[0]
            items = [(it.index, _n(reduct) if it.index == idx else it.atom)
                     for it in cur.antecedent]
            nxt_seq = sequent(items, list(cur.consequent))
            nxt = b.reserve()
            b.place(pending, cur, LUnf(idx), (nxt,))
            pending = nxt
            cur = nxt_seq
        elif kind == "drop":
            keep = list(cur.antecedent)
            keep.remove(rng.choice(keep))
            nxt_seq = Sequent(tuple(keep), cur.consequent)
            nxt = b.reserve()
            b.place(pending, cur, weaken({it.index: it.index for it in keep}), (nxt,))
            pending = nxt
            cur = nxt_seq
        elif kind == "runf":
            nxt = b.reserve()
            b.place(pending, cur, RUnf(0, T_SELF), (nxt,))
            pending = nxt
        else:  # identity substitution, a pure stutter
            nxt = b.reserve()
            b.place(pending, cur, subst_rule({}), (nxt,))
            pending = nxt
    return pending, cur


def _close_onto(b: _Builder, rng: random.Random, pending: int, cur: Sequent,
                target: Sequent, companion: int) -> None:
    """Weaken and instantiate the open end onto a bud labelled `target`."""
    want = list(target.antecedent)
    have = list(cur.antecedent)
    chosen = sorted(rng.sample(have, len(want)), key=lambda it: it.index)

    theta = {}
    for pat, it in zip(want, chosen):
        theta[pat.atom.args[0].symbol] = it.atom.args[0]
    theta = {k: v for k, v in theta.items() if not (v.kind == "var" and v.symbol == k)}

    same_shape = (len(have) == len(want)
                  and [it.index for it in chosen] == [w.index for w in want])
    if not same_shape:
        retained = {it.index: pat.index for pat, it in zip(want, chosen)}
        mid_seq = sequent([(pat.index, it.atom) for pat, it in zip(want, chosen)],
                          list(cur.consequent))
        mid = b.reserve()
        b.place(pending, cur, weaken(retained), (mid,))
        pending = mid
        cur = mid_seq

    if not theta and cur == target:
        # already labelled with the companion's sequent: the open end is the bud
        b.place(pending, target, Backlink(companion))
        b.buds[pending] = companion
        return

    bud = b.reserve()
    b.place(pending, cur, subst_rule(theta), (bud,))
    b.place(bud, target, Backlink(companion))
    b.buds[bud] = companion


def _two_root(b: _Builder, rng: random.Random) -> PreProof:
    s1 = _pattern_sequent([1, 2])
    s2 = _pattern_sequent([1])
    r1 = b.reserve()
    end, cur = _grow_path(b, rng, r1, s1, rng.randint(0, 1),
                          allow_progress=False, min_atoms=1)
    r2 = b.reserve()
    _close_onto(b, rng, end, cur, s2, r2)

    zero_id = b.reserve()
    succ_id = b.reserve()
    b.place(r2, s2, LUnf(1), (zero_id, succ_id))
    b.place(zero_id, sequent([(1, _n(zero()))], [GOAL]), AxiomRule())
    succ = sequent([(1, _n(var("z"))), (4, _n(_s(var("z"))))], [GOAL])
    end, cur = _grow_path(b, rng, succ_id, succ, rng.randint(0, 1),
                          allow_progress=False, min_atoms=2)
    _close_onto(b, rng, end, cur, s1, r1)
    return PreProof(b.nodes, r1, b.buds)


def random_document(rng: random.Random, max_nodes: int = 8,
                    max_iaas: int = 3, name: str = "fuzz") -> ProofDocument:
    """A random well-formed pre-proof over naturals with a trivial goal.

    Mixes progressing and stuttering cycles, interior companions, two-root
    rings and acyclic shapes; the result always passes validation.
    """
    sysm = fuzz_system()
    for _ in range(100):
        b = _Builder()
        kind = rng.choices(
            ["acyclic", "loop", "hangoff", "two-root", "stutter"],
            weights=[10, 40, 20, 20, 10])[0]
        k = rng.randint(1, max_iaas)
        root_seq = _pattern_sequent(list(range(1, k + 1)))

        if kind == "acyclic":
            root = b.reserve()
            zero_items = [(it.index, it.atom.apply({"x": zero()}))
                          for it in root_seq.antecedent]
            succ_items = [(it.index, _n(var("z")) if it.index == 1 else it.atom)
                          for it in root_seq.antecedent]
            z_id, s_id = b.reserve(), b.reserve()
            b.place(root, root_seq, LUnf(1), (z_id, s_id))
            b.place(z_id, sequent(zero_items, [GOAL]), AxiomRule())
            b.place(s_id, sequent(succ_items, [GOAL]), AxiomRule())
            pp = PreProof(b.nodes, root, b.buds)
        elif kind == "two-root":
            pp = _two_root(b, rng)
        else:
            root = b.reserve()
            steps = rng.randint(1, 2)
            end, cur = _grow_path(b, rng, root, root_seq, steps,
                                  allow_progress=(kind != "stutter"),
                                  min_atoms=len(root_seq.antecedent),
                                  stutter_hangoff=(kind == "hangoff"))
            _close_onto(b, rng, end, cur, root_seq, root)
            pp = PreProof(b.nodes, root, b.buds)

        if len(pp.nodes) > max_nodes:
            continue
        errors = validate_preproof(pp, sysm)
        if errors:
            raise AssertionError(f"generator produced an invalid document: {errors[0]}")
        return ProofDocument(sysm, pp, {"name": name, "source": "random generator"})
    raise AssertionError("generator failed to fit the node budget")
