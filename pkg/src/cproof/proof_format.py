"""Textual format for inductive systems and pre-proofs.

Documents are UTF-8 JSON with top-level keys "metadata", "system", "nodes",
"root" and "buds". Serialization is canonical: two-space indentation, sorted
keys, nodes sorted by id and antecedents sorted by index, so equal documents
serialize bit-for-bit identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from .core import (
    Atom,
    AxiomRule,
    Backlink,
    ExFalso,
    Generic,
    IdRule,
    InductiveSystem,
    LUnf,
    Node,
    PreProof,
    Production,
    RUnf,
    Rule,
    Sequent,
    SubstRule,
    Term,
    TracePair,
    Weaken,
    app,
    validate_preproof,
    var,
)


class ParseError(Exception):
    """Structural failure; carries location and the tokens that were expected."""

    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None, expected: tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected
        where = f" (line {line}, column {column})" if line is not None else ""
        hint = f"; expected one of {sorted(expected)}" if expected else ""
        super().__init__(f"{message}{where}{hint}")


class SemanticError(Exception):
    """Well-formed JSON that fails pre-proof validation."""

    def __init__(self, errors: list):
        self.errors = errors
        super().__init__("; ".join(str(e) for e in errors))


@dataclass(frozen=True)
class ProofDocument:
    system: InductiveSystem
    preproof: PreProof
    metadata: dict[str, str] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.metadata.get("name", "<unnamed>")


# ---------------------------------------------------------------------------
# JSON -> model

_RULE_NAMES = ("LUnf", "RUnf", "Id", "ExFalso", "Axiom", "Weaken", "Subst",
               "Backlink", "Generic")


def _want(obj: Any, keys: set[str], what: str) -> None:
    if not isinstance(obj, dict):
        raise ParseError(f"{what} must be an object", expected=tuple(keys))
    extra = set(obj) - keys
    if extra:
        raise ParseError(f"unknown keys {sorted(extra)} in {what}", expected=tuple(keys))
    missing = keys - set(obj)
    if missing:
        raise ParseError(f"missing keys {sorted(missing)} in {what}", expected=tuple(missing))


def term_from_json(j: Any) -> Term:
    if isinstance(j, str):
        if not j:
            raise ParseError("empty term symbol")
        if j.isdigit():
            return app(j)
        return var(j)
    if isinstance(j, list):
        if len(j) != 2 or not isinstance(j[0], str) or not isinstance(j[1], list):
            raise ParseError("constructor term must be [symbol, [args]]",
                             expected=("symbol", "argument list"))
        return Term("app", j[0], tuple(term_from_json(a) for a in j[1]))
    raise ParseError(f"bad term {j!r}", expected=("string", "[symbol, [args]]"))


def term_to_json(t: Term) -> Any:
    if t.kind == "var":
        return t.symbol
    if not t.args and t.symbol.isdigit():
        return t.symbol
    return [t.symbol, [term_to_json(a) for a in t.args]]


def _atom_from_json(j: Any, indexed: bool) -> tuple[int, Atom]:
    keys = {"pred", "args", "idx"} if indexed else {"pred", "args"}
    _want(j, keys, "atom")
    if not isinstance(j["pred"], str) or not isinstance(j["args"], list):
        raise ParseError("atom needs a predicate name and an argument list")
    atom = Atom(j["pred"], tuple(term_from_json(a) for a in j["args"]))
    if indexed:
        if not isinstance(j["idx"], int) or j["idx"] < 1:
            raise ParseError("antecedent atom index must be a positive integer")
        return j["idx"], atom
    return 0, atom


def _atom_to_json(a: Atom, idx: Optional[int] = None) -> dict:
    out: dict[str, Any] = {"pred": a.predicate, "args": [term_to_json(t) for t in a.args]}
    if idx is not None:
        out["idx"] = idx
    return out


def _sequent_from_json(j: Any) -> Sequent:
    _want(j, {"lhs", "rhs"}, "sequent")
    if not isinstance(j["lhs"], list) or not isinstance(j["rhs"], list):
        raise ParseError("sequent sides must be lists")
    lhs = [_atom_from_json(a, indexed=True) for a in j["lhs"]]
    rhs = [_atom_from_json(a, indexed=False)[1] for a in j["rhs"]]
    from .core import sequent as mk
    return mk(lhs, rhs)


def _sequent_to_json(s: Sequent) -> dict:
    return {
        "lhs": [_atom_to_json(it.atom, it.index) for it in sorted(s.antecedent, key=lambda i: i.index)],
        "rhs": [_atom_to_json(a) for a in s.consequent],
    }


def _int_keyed(j: Any, what: str) -> dict[int, int]:
    if not isinstance(j, dict):
        raise ParseError(f"{what} must be an object")
    out = {}
    for k, v in j.items():
        if not isinstance(v, int):
            raise ParseError(f"{what} values must be integers")
        try:
            out[int(k)] = v
        except ValueError:
            raise ParseError(f"{what} keys must be integers, got {k!r}")
    return out


def _rule_from_json(j: Any) -> tuple[Rule, tuple[int, ...]]:
    if not isinstance(j, dict) or "name" not in j:
        raise ParseError("rule must be an object with a name", expected=_RULE_NAMES)
    name = j["name"]
    premises: tuple[int, ...] = ()
    if "premises" in j:
        if not isinstance(j["premises"], list) or not all(isinstance(p, int) for p in j["premises"]):
            raise ParseError("premises must be a list of node ids")
        premises = tuple(j["premises"])
    if name == "LUnf":
        _want(j, {"name", "target", "premises"}, "LUnf rule")
        return LUnf(j["target"]), premises
    if name == "RUnf":
        _want(j, {"name", "position", "production", "premises"}, "RUnf rule")
        return RUnf(j["position"], j["production"]), premises
    if name == "Id":
        _want(j, {"name"}, "Id rule")
        return IdRule(), ()
    if name == "ExFalso":
        _want(j, {"name"}, "ExFalso rule")
        return ExFalso(), ()
    if name == "Axiom":
        _want(j, {"name"}, "Axiom rule")
        return AxiomRule(), ()
    if name == "Weaken":
        _want(j, {"name", "retained", "premises"}, "Weaken rule")
        return Weaken(tuple(sorted(_int_keyed(j["retained"], "retained map").items()))), premises
    if name == "Subst":
        _want(j, {"name", "subst", "premises"}, "Subst rule")
        if not isinstance(j["subst"], dict):
            raise ParseError("substitution must map variable names to terms")
        mapping = tuple(sorted((k, term_from_json(v)) for k, v in j["subst"].items()))
        return SubstRule(mapping), premises
    if name == "Backlink":
        _want(j, {"name", "companion"}, "Backlink rule")
        if not isinstance(j["companion"], int):
            raise ParseError("companion must be a node id")
        return Backlink(j["companion"]), ()
    if name == "Generic":
        _want(j, {"name", "label", "premises", "trace_pairs"}, "Generic rule")
        tps = j["trace_pairs"]
        declared = None
        if tps is not None:
            if not isinstance(tps, list):
                raise ParseError("trace_pairs must be a list per premise")
            declared = tuple(
                tuple(TracePair(int(c), int(p), bool(f)) for c, p, f in group)
                for group in tps)
        return Generic(j["label"], declared), premises
    raise ParseError(f"unknown rule name {name!r}", expected=_RULE_NAMES)


def _rule_to_json(node: Node) -> dict:
    rule = node.rule
    prem = list(node.premises)
    if isinstance(rule, LUnf):
        return {"name": "LUnf", "target": rule.target, "premises": prem}
    if isinstance(rule, RUnf):
        return {"name": "RUnf", "position": rule.position, "production": rule.production,
                "premises": prem}
    if isinstance(rule, IdRule):
        return {"name": "Id"}
    if isinstance(rule, ExFalso):
        return {"name": "ExFalso"}
    if isinstance(rule, AxiomRule):
        return {"name": "Axiom"}
    if isinstance(rule, Weaken):
        return {"name": "Weaken", "retained": {str(c): p for c, p in rule.retained},
                "premises": prem}
    if isinstance(rule, SubstRule):
        return {"name": "Subst", "subst": {k: term_to_json(v) for k, v in rule.mapping},
                "premises": prem}
    if isinstance(rule, Backlink):
        return {"name": "Backlink", "companion": rule.companion}
    if isinstance(rule, Generic):
        tps = None
        if rule.trace_pairs is not None:
            tps = [[[tp.conclusion_index, tp.premise_index, tp.progressing] for tp in group]
                   for group in rule.trace_pairs]
        return {"name": "Generic", "label": rule.label, "premises": prem, "trace_pairs": tps}
    raise ValueError(f"unknown rule {rule!r}")


def _system_from_json(j: Any) -> InductiveSystem:
    _want(j, {"predicates", "productions"}, "system")
    preds = []
    for p in j["predicates"]:
        if not (isinstance(p, list) and len(p) == 2 and isinstance(p[0], str)
                and isinstance(p[1], int)):
            raise ParseError("predicate declarations are [name, arity] pairs")
        preds.append((p[0], p[1]))
    prods = []
    for p in j["productions"]:
        _want(p, {"premises", "conclusion"}, "production")
        prem = tuple(_atom_from_json(a, indexed=False)[1] for a in p["premises"])
        concl = _atom_from_json(p["conclusion"], indexed=False)[1]
        prods.append(Production(prem, concl))
    return InductiveSystem(tuple(preds), tuple(prods))


def _system_to_json(sys: InductiveSystem) -> dict:
    return {
        "predicates": [[n, a] for n, a in sys.predicates],
        "productions": [
            {"premises": [_atom_to_json(a) for a in p.premises],
             "conclusion": _atom_to_json(p.conclusion)}
            for p in sys.productions],
    }


def parse_document(text: str) -> ProofDocument:
    """Parse and validate a document; round-trips with serialize_document."""
    try:
        j = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno,
                         expected=("valid JSON",)) from None

    _want(j, {"metadata", "system", "nodes", "root", "buds"}, "document")
    metadata = j["metadata"]
    if not isinstance(metadata, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in metadata.items()):
        raise ParseError("metadata must map strings to strings")
    system = _system_from_json(j["system"])

    if not isinstance(j["nodes"], list):
        raise ParseError("nodes must be a list")
    try:
        nodes: dict[int, Node] = {}
        for nj in j["nodes"]:
            _want(nj, {"id", "sequent", "rule"}, "node")
            if not isinstance(nj["id"], int):
                raise ParseError("node id must be an integer")
            if nj["id"] in nodes:
                raise ParseError(f"duplicate node id {nj['id']}")
            seq = _sequent_from_json(nj["sequent"])
            rule, premises = _rule_from_json(nj["rule"])
            nodes[nj["id"]] = Node(seq, rule, premises)
    except ValueError as exc:
        # index clashes inside a sequent surface here
        raise SemanticError([str(exc)]) from None

    if not isinstance(j["root"], int):
        raise ParseError("root must be a node id")
    buds = _int_keyed(j["buds"], "buds")

    if j["root"] not in nodes:
        raise ParseError(f"root {j['root']} is not a node", expected=("existing node id",))
    for nid, node in nodes.items():
        for p in node.premises:
            if p not in nodes:
                raise ParseError(f"node {nid} references missing premise {p}",
                                 expected=("existing node id",))
    for b, c in buds.items():
        if b not in nodes or c not in nodes:
            raise ParseError(f"back-link {b} -> {c} references a missing node",
                             expected=("existing node id",))

    pp = PreProof(nodes, j["root"], buds)
    doc = ProofDocument(system, pp, dict(metadata))
    errors = validate_preproof(pp, system)
    if errors:
        raise SemanticError(errors)
    return doc


def document_to_json(doc: ProofDocument) -> dict:
    return {
        "metadata": dict(sorted(doc.metadata.items())),
        "system": _system_to_json(doc.system),
        "nodes": [
            {"id": nid, "sequent": _sequent_to_json(node.sequent), "rule": _rule_to_json(node)}
            for nid, node in sorted(doc.preproof.nodes.items())],
        "root": doc.preproof.root,
        "buds": {str(b): c for b, c in sorted(doc.preproof.induction_fn.items())},
    }


def serialize_document(doc: ProofDocument) -> str:
    return json.dumps(document_to_json(doc), indent=2, sort_keys=True) + "\n"
