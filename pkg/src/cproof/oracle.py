"""Omega-automaton check of the global trace condition, at desk scale.

Two automata over the alphabet of node ids: one accepts exactly the infinite
walks of the proof digraph, the other the walks that carry a trace with
infinitely many progress points, started at any position. Language inclusion
of the first in the second is decided Ramsey-style: a finite monoid of
transition profiles is closed under composition and searched for a linked
stem/loop pair witnessing a rejected walk. The monoid blows up quickly, which
is the point; a hard state bound and an optional deadline keep runs honest.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Hashable, Optional

from .analysis import strongly_connected
from .core import InductiveSystem, validate_preproof
from .normalize import NormalizedDigraph, RootDigraph, normalize, root_digraph
from .proof_format import ProofDocument, SemanticError
from .traces import TraceContext

State = Hashable
Letter = int


class BoundExceeded(Exception):
    pass


class OracleTimeout(Exception):
    pass


@dataclass(frozen=True)
class BuchiAutomaton:
    states: tuple[State, ...]
    alphabet: tuple[Letter, ...]
    initial: frozenset
    transitions: dict[tuple[State, Letter], frozenset]
    accepting: frozenset

    def successors(self, state: State, letter: Letter) -> frozenset:
        return self.transitions.get((state, letter), frozenset())


INIT = ("init",)


def path_automaton(g: RootDigraph) -> BuchiAutomaton:
    """Accepts the infinite node sequences that are walks of g, from any start."""
    succ = g.successors()
    states: list[State] = [INIT] + [("node", v) for v in g.vertices]
    transitions: dict[tuple[State, Letter], frozenset] = {}
    for v in g.vertices:
        transitions[(INIT, v)] = frozenset({("node", v)})
    for a, targets in succ.items():
        for b in targets:
            transitions.setdefault((("node", a), b), frozenset())
            transitions[(("node", a), b)] = transitions[(("node", a), b)] | {("node", b)}
    return BuchiAutomaton(tuple(states), tuple(g.vertices), frozenset({INIT}),
                          transitions, frozenset(states))


def trace_automaton(nd: NormalizedDigraph, system: InductiveSystem) -> BuchiAutomaton:
    """Accepts the walks along which some trace progresses infinitely often.

    Watch states follow the walk before the trace starts; trace states carry
    the antecedent index being followed, doubled by a just-progressed flag
    that makes targets of progressing steps accepting.
    """
    ctx = TraceContext(nd.nodes, system, nd.induction_fn)
    g = root_digraph(nd)
    succ = g.successors()

    states: list[State] = [INIT]
    for v in g.vertices:
        states.append(("watch", v))
        for it in nd.nodes[v].sequent.antecedent:
            states.append(("trace", v, it.index, False))
            states.append(("trace", v, it.index, True))

    transitions: dict[tuple[State, Letter], set] = {}

    def add(src: State, letter: Letter, dst: State) -> None:
        transitions.setdefault((src, letter), set()).add(dst)

    for v in g.vertices:
        add(INIT, v, ("watch", v))
        for it in nd.nodes[v].sequent.antecedent:
            add(INIT, v, ("trace", v, it.index, False))
    for v in g.vertices:
        for w in succ[v]:
            add(("watch", v), w, ("watch", w))
            for it in nd.nodes[w].sequent.antecedent:
                add(("watch", v), w, ("trace", w, it.index, False))

    for v in g.vertices:
        node = nd.nodes[v]
        steps: list[tuple[int, int]] = []
        for pos, prem in enumerate(node.premises):
            steps.append((pos, prem))
        if v in nd.induction_fn:
            steps.append((0, nd.induction_fn[v]))
        for pos, target in steps:
            pairs = ctx.step_pairs(v, pos)
            for tp in pairs:
                for flag in (False, True):
                    add(("trace", v, tp.conclusion_index, flag), target,
                        ("trace", target, tp.premise_index, tp.progressing))

    accepting = frozenset(s for s in states
                          if isinstance(s, tuple) and s[0] == "trace" and s[3])
    return BuchiAutomaton(tuple(states), tuple(g.vertices), frozenset({INIT}),
                          {k: frozenset(v) for k, v in transitions.items()}, accepting)


# ---------------------------------------------------------------------------
# Ramsey-style inclusion


@dataclass(frozen=True)
class Lasso:
    stem: tuple[Letter, ...]
    loop: tuple[Letter, ...]

    def __str__(self) -> str:
        stem = " ".join(str(x) for x in self.stem)
        loop = " ".join(str(x) for x in self.loop)
        return f"{stem} | {loop}"


@dataclass(frozen=True)
class InclusionResult:
    included: bool
    counterexample: Optional[Lasso] = None


class _Profiles:
    """Transition profiles of one automaton, as sparse bitmask rows.

    A profile maps each source state with any run over the word to the pair
    (plain targets, targets reached with an accepting visit on the way); it
    is stored as a sorted tuple of (source, plain mask, accepting mask) rows
    so that composition only walks the nonzero rows.
    """

    def __init__(self, aut: BuchiAutomaton):
        self.aut = aut
        self.index = {s: i for i, s in enumerate(aut.states)}
        self.n = len(aut.states)
        self.acc_mask = 0
        for s in aut.accepting:
            self.acc_mask |= 1 << self.index[s]
        self.initial = [self.index[s] for s in aut.initial]
        self._letters: dict[Letter, tuple] = {}
        rows: dict[Letter, dict[int, tuple[int, int]]] = {}
        for (src, lt), targets in aut.transitions.items():
            if not targets:
                continue
            i = self.index[src]
            pm, am = rows.setdefault(lt, {}).get(i, (0, 0))
            for t in targets:
                j = self.index[t]
                if (self.acc_mask >> j) & 1:
                    am |= 1 << j
                else:
                    pm |= 1 << j
            rows[lt][i] = (pm, am)
        for lt, per_src in rows.items():
            self._letters[lt] = tuple(sorted((q, pm, am) for q, (pm, am) in per_src.items()))

    def letter_profile(self, letter: Letter) -> tuple:
        return self._letters.get(letter, ())

    def compose(self, g: tuple, h: tuple) -> tuple:
        hrows = {q: (pm, am) for q, pm, am in h}
        out = []
        for q, pm, am in g:
            np = 0
            na = 0
            m = pm
            while m:
                r = (m & -m).bit_length() - 1
                m &= m - 1
                row = hrows.get(r)
                if row:
                    np |= row[0]
                    na |= row[1]
            m = am
            while m:
                r = (m & -m).bit_length() - 1
                m &= m - 1
                row = hrows.get(r)
                if row:
                    na |= row[0] | row[1]
            if np or na:
                out.append((q, np, na))
        return tuple(out)


def _row_lookup(profile: tuple, q: int) -> tuple[int, int]:
    for src, pm, am in profile:
        if src == q:
            return pm, am
    return 0, 0


def _b_accepts(prof: _Profiles, stem_profile: tuple, loop_profile: tuple) -> bool:
    """Some run follows the stem and then loops through an accepting state."""
    loop_rows = {q: am for q, _, am in loop_profile}
    for p0 in prof.initial:
        pm, am = _row_lookup(stem_profile, p0)
        m = pm | am
        while m:
            p = (m & -m).bit_length() - 1
            m &= m - 1
            if (loop_rows.get(p, 0) >> p) & 1:
                return True
    return False


def buchi_inclusion(A: BuchiAutomaton, B: BuchiAutomaton,
                    state_bound: int = 400,
                    deadline: Optional[float] = None,
                    element_bound: int = 200_000) -> InclusionResult:
    """Decide L(A) subseteq L(B); on failure return a rejected lasso word.

    Supergraph search: elements pair a single step relation of A (start
    state, end state, accepting-visit bit) with the full transition profile
    of B over one shared witness word, and are closed under concatenation.
    A counterexample is a linked stem/loop pair (loop idempotent and absorbed
    by the stem) whose word A accepts and B does not; Ramsey factorization of
    any rejected word makes the search complete. Raises BoundExceeded when
    the combined state count or the element count passes the configured
    bounds, and OracleTimeout past the deadline.
    """
    if len(A.states) + len(B.states) > state_bound:
        raise BoundExceeded(
            f"{len(A.states)} + {len(B.states)} states exceed the bound {state_bound}")

    pb = _Profiles(B)
    a_index = {s: i for i, s in enumerate(A.states)}
    a_initial = {a_index[s] for s in A.initial}
    a_acc = {a_index[s] for s in A.accepting}

    elements: dict[tuple, tuple[Letter, ...]] = {}
    by_start: dict[int, list[tuple]] = {}
    by_end: dict[int, list[tuple]] = {}
    loops: dict[int, list[tuple]] = {}  # idempotent accepting self-loops by state
    stems: dict[int, list[tuple]] = {}  # initial-rooted elements by end state
    worklist: list[tuple] = []

    def check_pair(x: tuple, y: tuple) -> Optional[Lasso]:
        # x stem, y loop; y is already known idempotent with accepting bit
        if pb.compose(x[3], y[3]) != x[3]:
            return None
        if not _b_accepts(pb, x[3], y[3]):
            return Lasso(elements[x], elements[y])
        return None

    def note(key: tuple, word: tuple[Letter, ...]) -> Optional[Lasso]:
        if key in elements:
            return None
        if len(elements) >= element_bound:
            raise BoundExceeded(f"profile monoid larger than {element_bound}")
        if deadline is not None and time.monotonic() > deadline:
            raise OracleTimeout("inclusion check passed its deadline")
        elements[key] = word
        worklist.append(key)
        a1, a2, bit, g = key
        by_start.setdefault(a1, []).append(key)
        by_end.setdefault(a2, []).append(key)
        if a1 == a2 and bit and pb.compose(g, g) == g:
            loops.setdefault(a1, []).append(key)
            for x in list(stems.get(a1, [])):
                hit = check_pair(x, key)
                if hit:
                    return hit
        if a1 in a_initial:
            stems.setdefault(a2, []).append(key)
            for y in list(loops.get(a2, [])):
                hit = check_pair(key, y)
                if hit:
                    return hit
        return None

    for letter in sorted(A.alphabet):
        lp = pb.letter_profile(letter)
        for (src, lt), targets in sorted(A.transitions.items(), key=str):
            if lt != letter:
                continue
            for t in sorted(targets, key=str):
                key = (a_index[src], a_index[t], a_index[t] in a_acc, lp)
                hit = note(key, (letter,))
                if hit:
                    return InclusionResult(False, hit)

    cursor = 0
    while cursor < len(worklist):
        e = worklist[cursor]
        cursor += 1
        e1, e2, ebit, eg = e
        for f in list(by_start.get(e2, [])):
            key = (e1, f[1], ebit or f[2], pb.compose(eg, f[3]))
            hit = note(key, elements[e] + elements[f])
            if hit:
                return InclusionResult(False, hit)
        for f in list(by_end.get(e1, [])):
            key = (f[0], e2, f[2] or ebit, pb.compose(f[3], eg))
            hit = note(key, elements[f] + elements[e])
            if hit:
                return InclusionResult(False, hit)
    return InclusionResult(True, None)


# ---------------------------------------------------------------------------
# Exact membership of ultimately periodic words (for replay and testing)


def ultimately_periodic_member(aut: BuchiAutomaton, stem: tuple[Letter, ...],
                               loop: tuple[Letter, ...]) -> bool:
    if not loop:
        raise ValueError("loop must be nonempty")
    current = set(aut.initial)
    for letter in stem:
        nxt: set = set()
        for s in current:
            nxt |= aut.successors(s, letter)
        current = nxt
    if not current:
        return False

    period = len(loop)
    vertices = [(s, i) for s in aut.states for i in range(period)]
    succ: dict[tuple, list[tuple]] = {v: [] for v in vertices}
    for s in aut.states:
        for i in range(period):
            for t in aut.successors(s, loop[i]):
                succ[(s, i)].append((t, (i + 1) % period))

    reachable: set[tuple] = set()
    stack = [(s, 0) for s in current]
    while stack:
        v = stack.pop()
        if v in reachable:
            continue
        reachable.add(v)
        stack.extend(succ[v])

    comps = strongly_connected(sorted(reachable, key=str),
                               lambda v: [w for w in succ[v] if w in reachable])
    for comp in comps:
        cyclic = len(comp) > 1 or comp[0] in succ[comp[0]]
        if cyclic and any(s in aut.accepting for s, _ in comp):
            return True
    return False


# ---------------------------------------------------------------------------
# Document-level check


@dataclass(frozen=True)
class OracleVerdict:
    status: str  # "Valid" | "Invalid"
    lasso: Optional[Lasso] = None


def check_buchi(doc: ProofDocument, state_bound: int = 400,
                deadline: Optional[float] = None) -> OracleVerdict:
    """Definitive global-trace-condition check via automaton inclusion."""
    errors = validate_preproof(doc.preproof, doc.system)
    if errors:
        raise SemanticError(errors)
    nd = normalize(doc.preproof)
    g = root_digraph(nd)
    A = path_automaton(g)
    B = trace_automaton(nd, doc.system)
    result = buchi_inclusion(A, B, state_bound=state_bound, deadline=deadline)
    if result.included:
        return OracleVerdict("Valid")
    return OracleVerdict("Invalid", result.counterexample)
