"""Domain model for sequents, inference rules and cyclic pre-proofs.

Terms are first-order constructor terms, sequents carry indexed inductive
atoms on the left (IAAs) and plain atoms on the right, and a pre-proof is a
finite derivation forest whose terminal back-link nodes (buds) point at
interior or root nodes (companions) via an induction function.

Everything here is immutable after construction and all operations are pure,
so the module is safe for concurrent use without coordination.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Union


# ---------------------------------------------------------------------------
# Terms and atoms


@dataclass(frozen=True)
class Term:
    """A variable or a constructor application."""

    kind: str  # "var" | "app"
    symbol: str
    args: tuple["Term", ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("var", "app"):
            raise ValueError(f"bad term kind {self.kind!r}")
        if not self.symbol:
            raise ValueError("empty symbol")
        if self.kind == "var" and self.args:
            raise ValueError("variables take no arguments")

    def variables(self) -> set[str]:
        if self.kind == "var":
            return {self.symbol}
        out: set[str] = set()
        for a in self.args:
            out |= a.variables()
        return out

    def __str__(self) -> str:
        if self.kind == "var":
            return self.symbol
        if not self.args:
            return self.symbol
        return f"{self.symbol}({', '.join(str(a) for a in self.args)})"


def var(name: str) -> Term:
    return Term("var", name)


def app(symbol: str, *args: Term) -> Term:
    return Term("app", symbol, tuple(args))


def zero() -> Term:
    return app("0")


def succ(t: Term) -> Term:
    return app("s", t)


Subst = dict[str, Term]


def apply_subst(t: Term, sub: Subst) -> Term:
    if t.kind == "var":
        return sub.get(t.symbol, t)
    return Term("app", t.symbol, tuple(apply_subst(a, sub) for a in t.args))


def occurs(name: str, t: Term) -> bool:
    if t.kind == "var":
        return t.symbol == name
    return any(occurs(name, a) for a in t.args)


def unify(t1: Term, t2: Term, sub: Optional[Subst] = None) -> Optional[Subst]:
    """Most general unifier extending `sub`, or None."""
    sub = dict(sub) if sub else {}
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        a = apply_subst(a, sub)
        b = apply_subst(b, sub)
        if a == b:
            continue
        if a.kind == "var":
            if occurs(a.symbol, b):
                return None
            sub = {k: apply_subst(v, {a.symbol: b}) for k, v in sub.items()}
            sub[a.symbol] = b
        elif b.kind == "var":
            stack.append((b, a))
        else:
            if a.symbol != b.symbol or len(a.args) != len(b.args):
                return None
            stack.extend(zip(a.args, b.args))
    return sub


def match(pattern: Term, t: Term, sub: Optional[Subst] = None) -> Optional[Subst]:
    """One-way matching: find sub with pattern*sub == t."""
    sub = dict(sub) if sub else {}
    if pattern.kind == "var":
        bound = sub.get(pattern.symbol)
        if bound is None:
            sub[pattern.symbol] = t
            return sub
        return sub if bound == t else None
    if t.kind != "app" or t.symbol != pattern.symbol or len(t.args) != len(pattern.args):
        return None
    for p, u in zip(pattern.args, t.args):
        got = match(p, u, sub)
        if got is None:
            return None
        sub = got
    return sub


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    def apply(self, sub: Subst) -> "Atom":
        return Atom(self.predicate, tuple(apply_subst(a, sub) for a in self.args))

    def variables(self) -> set[str]:
        out: set[str] = set()
        for a in self.args:
            out |= a.variables()
        return out

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({', '.join(str(a) for a in self.args)})"


def atom_unify(a: Atom, b: Atom) -> Optional[Subst]:
    if a.predicate != b.predicate or len(a.args) != len(b.args):
        return None
    sub: Optional[Subst] = {}
    for x, y in zip(a.args, b.args):
        sub = unify(x, y, sub)
        if sub is None:
            return None
    return sub


def atom_match(pattern: Atom, a: Atom) -> Optional[Subst]:
    if pattern.predicate != a.predicate or len(pattern.args) != len(a.args):
        return None
    sub: Optional[Subst] = {}
    for p, t in zip(pattern.args, a.args):
        sub = match(p, t, sub)
        if sub is None:
            return None
    return sub


# ---------------------------------------------------------------------------
# Sequents and inductive systems


@dataclass(frozen=True)
class IAA:
    """An inductive antecedent atom with its identifying index."""

    index: int
    atom: Atom

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError("IAA index must be positive")


@dataclass(frozen=True)
class Sequent:
    antecedent: tuple[IAA, ...]
    consequent: tuple[Atom, ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for it in self.antecedent:
            if it.index in seen:
                raise ValueError(f"duplicate IAA index {it.index}")
            seen.add(it.index)

    def atom_at(self, index: int) -> Optional[Atom]:
        for it in self.antecedent:
            if it.index == index:
                return it.atom
        return None

    def indices(self) -> tuple[int, ...]:
        return tuple(it.index for it in self.antecedent)

    def variables(self) -> set[str]:
        out: set[str] = set()
        for it in self.antecedent:
            out |= it.atom.variables()
        for a in self.consequent:
            out |= a.variables()
        return out

    def __str__(self) -> str:
        lhs = ", ".join(f"{it.atom}[{it.index}]" for it in self.antecedent)
        rhs = ", ".join(str(a) for a in self.consequent)
        return f"{lhs} |- {rhs}"


def sequent(antecedent: list[tuple[int, Atom]], consequent: list[Atom]) -> Sequent:
    items = tuple(IAA(i, a) for i, a in sorted(antecedent, key=lambda p: p[0]))
    return Sequent(items, tuple(consequent))


@dataclass(frozen=True)
class Production:
    premises: tuple[Atom, ...]
    conclusion: Atom


@dataclass(frozen=True)
class InductiveSystem:
    predicates: tuple[tuple[str, int], ...]
    productions: tuple[Production, ...]

    def arity(self, predicate: str) -> Optional[int]:
        for name, k in self.predicates:
            if name == predicate:
                return k
        return None

    def productions_of(self, predicate: str) -> list[tuple[int, Production]]:
        return [(i, p) for i, p in enumerate(self.productions)
                if p.conclusion.predicate == predicate]


# ---------------------------------------------------------------------------
# Rules


@dataclass(frozen=True)
class LUnf:
    """Case analysis on an antecedent atom, one premise per matching production."""

    target: int


@dataclass(frozen=True)
class RUnf:
    """Replace a consequent atom by the premises of a matching production."""

    position: int
    production: int


@dataclass(frozen=True)
class IdRule:
    pass


@dataclass(frozen=True)
class ExFalso:
    pass


@dataclass(frozen=True)
class AxiomRule:
    pass


@dataclass(frozen=True)
class Weaken:
    """Drop antecedent atoms; `retained` maps conclusion index -> premise index."""

    retained: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict[int, int]:
        return dict(self.retained)


@dataclass(frozen=True)
class SubstRule:
    """Conclusion is the premise instantiated by the given substitution."""

    mapping: tuple[tuple[str, Term], ...]

    def as_subst(self) -> Subst:
        return dict(self.mapping)


@dataclass(frozen=True)
class Backlink:
    companion: int


@dataclass(frozen=True)
class TracePair:
    conclusion_index: int
    premise_index: int
    progressing: bool


@dataclass(frozen=True)
class Generic:
    """An externally justified rule; trace pairs must be declared per premise."""

    label: str
    trace_pairs: Optional[tuple[tuple[TracePair, ...], ...]] = None


Rule = Union[LUnf, RUnf, IdRule, ExFalso, AxiomRule, Weaken, SubstRule, Backlink, Generic]


def weaken(retained: dict[int, int]) -> Weaken:
    return Weaken(tuple(sorted(retained.items())))


def subst_rule(mapping: dict[str, Term]) -> SubstRule:
    return SubstRule(tuple(sorted(mapping.items())))


@dataclass(frozen=True)
class Node:
    sequent: Sequent
    rule: Rule
    premises: tuple[int, ...] = ()


@dataclass(frozen=True)
class PreProof:
    nodes: dict[int, Node]
    root: int
    induction_fn: dict[int, int]

    def node(self, node_id: int) -> Node:
        return self.nodes[node_id]

    def parent_map(self) -> dict[int, int]:
        parents: dict[int, int] = {}
        for nid, node in self.nodes.items():
            for p in node.premises:
                parents[p] = nid
        return parents

    def backlink_count(self) -> int:
        return len(self.induction_fn)

    def depth(self) -> int:
        """Length of the longest premise-edge path from any forest root."""
        parents = self.parent_map()
        roots = [n for n in self.nodes if n not in parents]
        best = 0
        stack = [(r, 0) for r in roots]
        while stack:
            nid, d = stack.pop()
            best = max(best, d)
            for p in self.nodes[nid].premises:
                stack.append((p, d + 1))
        return best


# ---------------------------------------------------------------------------
# Well-formedness


@dataclass(frozen=True)
class WellFormednessError:
    code: str
    node: Optional[int]
    message: str

    def __str__(self) -> str:
        where = f" at node {self.node}" if self.node is not None else ""
        return f"{self.code}{where}: {self.message}"


DANGLING_COMPANION = "DanglingCompanion"
SEQUENT_MISMATCH_AT_BUD = "SequentMismatchAtBud"
NON_TERMINAL_BUD = "NonTerminalBud"
ARITY_ERROR = "ArityError"
ILLEGAL_RULE_INSTANCE = "IllegalRuleInstance"
MALFORMED_GRAPH = "MalformedGraph"


def _err(code: str, node: Optional[int], message: str) -> WellFormednessError:
    return WellFormednessError(code, node, message)


def _fresh_names(base: str, taken: set[str], count: int) -> list[str]:
    out = []
    i = 0
    while len(out) < count:
        name = f"{base}{i}"
        if name not in taken:
            out.append(name)
            taken.add(name)
        i += 1
    return out


def _rename_production(prod: Production, taken: set[str]) -> Production:
    pvars: set[str] = set()
    for a in (*prod.premises, prod.conclusion):
        pvars |= a.variables()
    ordered = sorted(pvars)
    fresh = _fresh_names("_p", set(taken), len(ordered))
    ren = {v: var(f) for v, f in zip(ordered, fresh)}
    return Production(tuple(a.apply(ren) for a in prod.premises), prod.conclusion.apply(ren))


def _orient_mgu(sub: Subst, seq_vars: set[str]) -> Subst:
    """Prefer binding production variables over sequent variables.

    A variable-to-variable binding x -> w with x from the sequent and w from
    the renamed production is inverted, so the sequent side stays untouched
    unless the case split genuinely instantiates it.
    """
    out = dict(sub)
    while True:
        flip = None
        for k, v in out.items():
            if k in seq_vars and v.kind == "var" and v.symbol not in seq_vars:
                flip = (k, v.symbol)
                break
        if flip is None:
            return out
        x, w = flip
        swap = {w: var(x)}
        out = {k: apply_subst(v, swap) for k, v in out.items() if k != x}
        out[w] = var(x)


def matching_productions(sys: InductiveSystem, atom: Atom,
                         taken_vars: set[str]) -> list[tuple[int, Production, Subst]]:
    """Productions whose (renamed-apart) conclusion unifies with `atom`, in order."""
    out = []
    for pid, prod in sys.productions_of(atom.predicate):
        renamed = _rename_production(prod, taken_vars)
        sub = atom_unify(atom, renamed.conclusion)
        if sub is not None:
            out.append((pid, renamed, _orient_mgu(sub, taken_vars)))
    return out


def check_arities(sys: InductiveSystem) -> list[WellFormednessError]:
    errors: list[WellFormednessError] = []
    declared = {name for name, _ in sys.predicates}
    ctor_arity: dict[str, int] = {"0": 0, "s": 1}

    def walk(t: Term) -> None:
        if t.kind == "app":
            before = ctor_arity.setdefault(t.symbol, len(t.args))
            if before != len(t.args):
                errors.append(_err(ARITY_ERROR, None,
                                   f"constructor {t.symbol} used with arities {before} and {len(t.args)}"))
            for a in t.args:
                walk(a)

    def check_atom(a: Atom, where: str) -> None:
        want = sys.arity(a.predicate)
        if want is None:
            errors.append(_err(ARITY_ERROR, None, f"undeclared predicate {a.predicate} in {where}"))
        elif want != len(a.args):
            errors.append(_err(ARITY_ERROR, None,
                               f"{a.predicate} declared with arity {want}, used with {len(a.args)} in {where}"))
        for t in a.args:
            walk(t)

    for i, prod in enumerate(sys.productions):
        check_atom(prod.conclusion, f"production {i}")
        for p in prod.premises:
            check_atom(p, f"production {i}")
    if len(declared) != len(sys.predicates):
        errors.append(_err(ARITY_ERROR, None, "predicate declared twice"))
    return errors


def _collect_symbols(t: Term, vars_seen: set[str], ctors_seen: set[str]) -> None:
    if t.kind == "var":
        vars_seen.add(t.symbol)
    else:
        ctors_seen.add(t.symbol)
        for a in t.args:
            _collect_symbols(a, vars_seen, ctors_seen)


def validate_preproof(pp: PreProof, sys: InductiveSystem) -> list[WellFormednessError]:
    """All structural and rule-level checks; empty list means well-formed."""
    errors = check_arities(sys)

    vars_seen: set[str] = set()
    ctors_seen: set[str] = set()
    for node in pp.nodes.values():
        for it in node.sequent.antecedent:
            for t in it.atom.args:
                _collect_symbols(t, vars_seen, ctors_seen)
        for a in node.sequent.consequent:
            for t in a.args:
                _collect_symbols(t, vars_seen, ctors_seen)
    for prod in sys.productions:
        for a in (*prod.premises, prod.conclusion):
            for t in a.args:
                _collect_symbols(t, vars_seen, ctors_seen)
    for name in sorted(vars_seen & ctors_seen):
        errors.append(_err(ARITY_ERROR, None,
                           f"symbol {name} used both as a variable and a constructor"))

    if pp.root not in pp.nodes:
        errors.append(_err(MALFORMED_GRAPH, pp.root, "root is not a node"))
        return errors

    parents: dict[int, int] = {}
    for nid, node in sorted(pp.nodes.items()):
        for p in node.premises:
            if p not in pp.nodes:
                errors.append(_err(MALFORMED_GRAPH, nid, f"premise {p} is not a node"))
            elif p in parents:
                errors.append(_err(MALFORMED_GRAPH, nid, f"node {p} has two parents"))
            else:
                parents[p] = nid

    # premise edges must be acyclic (each node has one parent, so a cycle
    # would show up as a root-less walk)
    for nid in pp.nodes:
        seen = set()
        cur: Optional[int] = nid
        while cur is not None:
            if cur in seen:
                errors.append(_err(MALFORMED_GRAPH, nid, "premise edges contain a cycle"))
                break
            seen.add(cur)
            cur = parents.get(cur)

    companions = set(pp.induction_fn.values())
    entry_points = {pp.root} | companions
    covered: set[int] = set()
    stack = [e for e in entry_points if e in pp.nodes]
    while stack:
        nid = stack.pop()
        if nid in covered:
            continue
        covered.add(nid)
        stack.extend(p for p in pp.nodes[nid].premises if p in pp.nodes)
    for nid in sorted(pp.nodes):
        if nid not in covered:
            errors.append(_err(MALFORMED_GRAPH, nid, "node unreachable from root and companions"))

    for bud, comp in sorted(pp.induction_fn.items()):
        if bud not in pp.nodes:
            errors.append(_err(MALFORMED_GRAPH, bud, "bud is not a node"))
            continue
        node = pp.nodes[bud]
        if comp not in pp.nodes:
            errors.append(_err(DANGLING_COMPANION, bud, f"companion {comp} is not a node"))
            continue
        if node.premises:
            errors.append(_err(NON_TERMINAL_BUD, bud, "bud has premises"))
        if not isinstance(node.rule, Backlink):
            errors.append(_err(ILLEGAL_RULE_INSTANCE, bud, "bud is not closed by a back-link"))
        elif node.rule.companion != comp:
            errors.append(_err(DANGLING_COMPANION, bud,
                               f"rule points at {node.rule.companion}, induction function at {comp}"))
        if node.sequent != pp.nodes[comp].sequent:
            errors.append(_err(SEQUENT_MISMATCH_AT_BUD, bud,
                               "bud sequent differs from companion sequent"))

    for nid, node in sorted(pp.nodes.items()):
        if isinstance(node.rule, Backlink) and nid not in pp.induction_fn:
            errors.append(_err(DANGLING_COMPANION, nid, "back-link node missing from induction function"))
        for it in node.sequent.antecedent:
            if sys.arity(it.atom.predicate) != len(it.atom.args):
                errors.append(_err(ARITY_ERROR, nid, f"bad antecedent atom {it.atom}"))
        for a in node.sequent.consequent:
            if sys.arity(a.predicate) != len(a.args):
                errors.append(_err(ARITY_ERROR, nid, f"bad consequent atom {a}"))
        errors.extend(_check_rule(pp, sys, nid))

    return errors


def _check_rule(pp: PreProof, sys: InductiveSystem, nid: int) -> list[WellFormednessError]:
    node = pp.nodes[nid]
    rule = node.rule
    seq = node.sequent
    bad = lambda msg: [_err(ILLEGAL_RULE_INSTANCE, nid, msg)]

    if any(p not in pp.nodes for p in node.premises):
        return []  # the structural pass already reported the dangling premise

    if isinstance(rule, (IdRule, ExFalso, AxiomRule, Backlink)):
        if node.premises:
            return bad("0-premise rule with premises")
        if isinstance(rule, IdRule):
            hits = {it.atom for it in seq.antecedent} & set(seq.consequent)
            if not hits:
                return bad("no antecedent atom equals a consequent atom")
        if isinstance(rule, ExFalso):
            for it in seq.antecedent:
                if not matching_productions(sys, it.atom, seq.variables()):
                    return []
            return bad("every antecedent atom matches some production")
        if isinstance(rule, AxiomRule):
            for a in seq.consequent:
                for _, prod in sys.productions_of(a.predicate):
                    if not prod.premises and atom_match(prod.conclusion, a) is not None:
                        return []
            return bad("no premise-free production proves a consequent atom")
        return []

    if isinstance(rule, Generic):
        if rule.trace_pairs is not None:
            if len(rule.trace_pairs) != len(node.premises):
                return bad("declared trace pairs do not match premise count")
            for pos, pairs in enumerate(rule.trace_pairs):
                prem = pp.nodes.get(node.premises[pos])
                if prem is None:
                    continue
                for tp in pairs:
                    if seq.atom_at(tp.conclusion_index) is None:
                        return bad(f"declared pair uses missing conclusion index {tp.conclusion_index}")
                    if prem.sequent.atom_at(tp.premise_index) is None:
                        return bad(f"declared pair uses missing premise index {tp.premise_index}")
        return []

    if len(node.premises) != 1 and not isinstance(rule, LUnf):
        return bad("rule needs exactly one premise")

    if isinstance(rule, Weaken):
        prem = pp.nodes[node.premises[0]].sequent
        retained = rule.as_dict()
        concl_indices = set(seq.indices())
        prem_indices = set(prem.indices())
        if set(retained) - concl_indices:
            return bad("retained map names missing conclusion indices")
        if sorted(retained.values()) != sorted(prem_indices) or \
                len(set(retained.values())) != len(retained):
            return bad("retained map is not a bijection onto the premise indices")
        for c, p in retained.items():
            if seq.atom_at(c) != prem.atom_at(p):
                return bad(f"retained atom changed at {c} -> {p}")
        if prem.consequent != seq.consequent:
            return bad("weakening must keep the consequent")
        return []

    if isinstance(rule, SubstRule):
        prem = pp.nodes[node.premises[0]].sequent
        theta = rule.as_subst()
        if tuple(a.apply(theta) for a in prem.consequent) != seq.consequent:
            return bad("consequent is not the instantiated premise consequent")
        want = Counter(it.atom.apply(theta) for it in prem.antecedent)
        got = Counter(it.atom for it in seq.antecedent)
        if want != got:
            return bad("antecedent is not the instantiated premise antecedent")
        return []

    if isinstance(rule, RUnf):
        if not (0 <= rule.position < len(seq.consequent)):
            return bad("consequent position out of range")
        if not (0 <= rule.production < len(sys.productions)):
            return bad("no such production")
        target = seq.consequent[rule.position]
        prod = _rename_production(sys.productions[rule.production], seq.variables())
        sub = atom_match(prod.conclusion, target)
        if sub is None:
            return bad("production conclusion does not match the atom")
        if not prod.premises:
            return bad("premise-free production cannot be unfolded on the right")
        prem = pp.nodes[node.premises[0]].sequent
        want_rhs = (seq.consequent[:rule.position]
                    + tuple(p.apply(sub) for p in prod.premises)
                    + seq.consequent[rule.position + 1:])
        if prem.consequent != want_rhs:
            return bad("premise consequent is not the unfolded consequent")
        if prem.antecedent != seq.antecedent:
            return bad("right unfolding must keep the antecedent")
        return []

    if isinstance(rule, LUnf):
        return _check_lunf(pp, sys, nid)

    return bad(f"unknown rule {rule!r}")


def _lunf_expected(seq: Sequent, target: int, prod: Production,
                   mgu: Subst) -> tuple[list[tuple[int, Atom]], list[Atom], Atom, list[Atom]]:
    """Carried atoms, descendant atoms, kept instance and consequent for one branch."""
    carried = [(it.index, it.atom.apply(mgu)) for it in seq.antecedent if it.index != target]
    descendants = [p.apply(mgu) for p in prod.premises]
    chosen = seq.atom_at(target)
    assert chosen is not None
    kept = chosen.apply(mgu)
    consequent = [a.apply(mgu) for a in seq.consequent]
    return carried, descendants, kept, consequent


def _lunf_premise_layout(seq: Sequent, target: int, prem: Sequent, prod: Production,
                         mgu: Subst) -> Optional[tuple[dict[int, int], Optional[int], Subst]]:
    """Match a premise sequent against one case branch.

    Returns (descendant index assignment, kept-instance index, renaming of the
    production's fresh variables), or None when the premise is not a legal
    instance of the branch. The chosen atom's index goes to the first
    descendant when the production has premises, otherwise to the kept copy.
    """
    carried, descendants, kept, consequent = _lunf_expected(seq, target, prod, mgu)
    # Fresh variables introduced by the case split may be named freely by the
    # premise; infer the renaming by matching the expected shapes.
    ren: Subst = {}
    seq_vars = seq.variables()

    prem_atoms = {it.index: it.atom for it in prem.antecedent}
    for idx, atom in carried:
        got = prem_atoms.pop(idx, None)
        if got is None:
            return None
        m = _match_with_fresh(atom, got, seq_vars, ren)
        if m is None:
            return None
        ren = m

    m = _match_atom_list(list(prem.consequent), consequent, seq_vars, ren)
    if m is None:
        return None
    ren = m

    # Remaining premise atoms must be the descendants plus at most one kept
    # copy of the chosen atom's instance. The chosen index survives on the
    # first descendant, or on the kept copy when the production has none.
    remaining = dict(sorted(prem_atoms.items()))
    desc_assignment: dict[int, int] = {}
    kept_index: Optional[int] = None

    expect: list[tuple[str, int, Atom]] = [("desc", i, d) for i, d in enumerate(descendants)]
    if descendants:
        # first descendant is pinned to the target index
        if target not in remaining:
            return None
        m = _match_with_fresh(descendants[0], remaining[target], seq_vars, ren)
        if m is None:
            return None
        ren = m
        desc_assignment[0] = target
        del remaining[target]
        expect = expect[1:]
        expect.append(("kept", -1, kept))
    else:
        if target in remaining:
            m = _match_with_fresh(kept, remaining[target], seq_vars, ren)
            if m is None:
                return None
            ren = m
            kept_index = target
            del remaining[target]

    for kindname, pos, pattern in expect:
        found = None
        for idx, atom in remaining.items():
            m = _match_with_fresh(pattern, atom, seq_vars, ren)
            if m is not None:
                found = (idx, m)
                break
        if found is None:
            if kindname == "kept":
                continue  # keeping the instantiated original is optional
            return None
        idx, ren = found
        del remaining[idx]
        if kindname == "desc":
            desc_assignment[pos] = idx
        else:
            kept_index = idx

    if remaining:
        return None  # stray atoms

    # Case variables must rename injectively to variables that are genuinely
    # fresh for the conclusion sequent; anything else specialises the branch.
    for v in ren.values():
        if v.kind != "var" or v.symbol in seq_vars:
            return None
    if len({v.symbol for v in ren.values()}) != len(ren):
        return None
    return desc_assignment, kept_index, ren


def _match_with_fresh(pattern: Atom, got: Atom, seq_vars: set[str], ren: Subst) -> Optional[Subst]:
    """Match where variables outside the conclusion sequent act as holes."""
    if pattern.predicate != got.predicate or len(pattern.args) != len(got.args):
        return None
    sub = dict(ren)
    for p, t in zip(pattern.args, got.args):
        sub2 = _match_term_with_fresh(p, t, seq_vars, sub)
        if sub2 is None:
            return None
        sub = sub2
    return sub


def _match_term_with_fresh(pattern: Term, t: Term, seq_vars: set[str],
                           sub: Subst) -> Optional[Subst]:
    if pattern.kind == "var":
        if pattern.symbol in seq_vars:
            return sub if pattern == t else None
        bound = sub.get(pattern.symbol)
        if bound is None:
            out = dict(sub)
            out[pattern.symbol] = t
            return out
        return sub if bound == t else None
    if t.kind != "app" or t.symbol != pattern.symbol or len(t.args) != len(pattern.args):
        return None
    for p, u in zip(pattern.args, t.args):
        got = _match_term_with_fresh(p, u, seq_vars, sub)
        if got is None:
            return None
        sub = got
    return sub


def _match_atom_list(got: list[Atom], want: list[Atom], seq_vars: set[str],
                     ren: Subst) -> Optional[Subst]:
    if len(got) != len(want):
        return None
    sub = ren
    for w, g in zip(want, got):
        nxt = _match_with_fresh(w, g, seq_vars, sub)
        if nxt is None:
            return None
        sub = nxt
    return sub


def _check_lunf(pp: PreProof, sys: InductiveSystem, nid: int) -> list[WellFormednessError]:
    node = pp.nodes[nid]
    rule = node.rule
    assert isinstance(rule, LUnf)
    seq = node.sequent
    bad = lambda msg: [_err(ILLEGAL_RULE_INSTANCE, nid, msg)]

    chosen = seq.atom_at(rule.target)
    if chosen is None:
        return bad(f"no antecedent atom with index {rule.target}")
    branches = matching_productions(sys, chosen, seq.variables())
    if len(branches) != len(node.premises):
        return bad(f"{len(branches)} case branches but {len(node.premises)} premises")
    for (pid, prod, mgu), prem_id in zip(branches, node.premises):
        prem = pp.nodes[prem_id].sequent
        if _lunf_premise_layout(seq, rule.target, prem, prod, mgu) is None:
            return bad(f"premise {prem_id} is not the case branch for production {pid}")
    return []


# ---------------------------------------------------------------------------
# Per-step trace semantics


class MissingDeclaredTracePairs(Exception):
    pass


def step_trace_pairs_of(nodes: dict[int, Node], sys: InductiveSystem,
                        induction_fn: dict[int, int], node_id: int,
                        premise_position: int) -> list[TracePair]:
    """Trace relation of one inference step, conclusion-to-premise.

    For a back-link node, premise position 0 stands for the companion.
    """
    node = nodes[node_id]
    rule = node.rule
    seq = node.sequent

    if isinstance(rule, Backlink):
        if premise_position != 0:
            raise IndexError("back-link has a single successor")
        return [TracePair(it.index, it.index, False) for it in seq.antecedent]

    prem_id = node.premises[premise_position]
    prem = nodes[prem_id].sequent

    if isinstance(rule, Generic):
        if rule.trace_pairs is None:
            raise MissingDeclaredTracePairs(f"generic rule at node {node_id} declares no trace pairs")
        return list(rule.trace_pairs[premise_position])

    if isinstance(rule, RUnf):
        return [TracePair(it.index, it.index, False) for it in seq.antecedent]

    if isinstance(rule, Weaken):
        return [TracePair(c, p, False) for c, p in sorted(rule.as_dict().items())]

    if isinstance(rule, SubstRule):
        theta = rule.as_subst()
        pairs: list[TracePair] = []
        used: set[int] = set()
        for it in sorted(prem.antecedent, key=lambda i: i.index):
            instance = it.atom.apply(theta)
            for cand in sorted(seq.antecedent, key=lambda i: i.index):
                if cand.index in used:
                    continue
                if cand.atom == instance:
                    pairs.append(TracePair(cand.index, it.index, False))
                    used.add(cand.index)
                    break
        return sorted(pairs, key=lambda tp: (tp.conclusion_index, tp.premise_index))

    if isinstance(rule, LUnf):
        chosen = seq.atom_at(rule.target)
        assert chosen is not None
        branches = matching_productions(sys, chosen, seq.variables())
        pid, prod, mgu = branches[premise_position]
        layout = _lunf_premise_layout(seq, rule.target, prem, prod, mgu)
        if layout is None:
            raise ValueError(f"premise {prem_id} is not a legal case branch")
        desc_assignment, kept_index, _ = layout
        pairs = []
        for it in seq.antecedent:
            if it.index != rule.target:
                pairs.append(TracePair(it.index, it.index, False))
        for pos in sorted(desc_assignment):
            pairs.append(TracePair(rule.target, desc_assignment[pos], True))
        if kept_index is not None:
            pairs.append(TracePair(rule.target, kept_index, False))
        return sorted(pairs, key=lambda tp: (tp.conclusion_index, tp.premise_index, tp.progressing))

    return []


def step_trace_pairs(pp: PreProof, node_id: int, premise_position: int,
                     sys: InductiveSystem) -> list[TracePair]:
    return step_trace_pairs_of(pp.nodes, sys, pp.induction_fn, node_id, premise_position)
