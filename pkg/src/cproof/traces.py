"""Whole-path traces built by composing per-step trace pairs."""

from __future__ import annotations

from dataclasses import dataclass

from .analysis import RootBudPath
from .core import InductiveSystem, Node, step_trace_pairs_of


@dataclass(frozen=True)
class Trace:
    path: RootBudPath
    occurrences: tuple[tuple[int, int], ...]  # (node id, antecedent index)
    progressing: bool

    @property
    def root_index(self) -> int:
        return self.occurrences[0][1]

    @property
    def bud_index(self) -> int:
        return self.occurrences[-1][1]


@dataclass(frozen=True)
class TraceContext:
    """The node table a path runs over; works for raw and normalized proofs."""

    nodes: dict[int, Node]
    system: InductiveSystem
    induction_fn: dict[int, int]

    def step_pairs(self, node_id: int, premise_position: int):
        return step_trace_pairs_of(self.nodes, self.system, self.induction_fn,
                                   node_id, premise_position)


def traces_along(path: RootBudPath, ctx: TraceContext) -> list[Trace]:
    """All maximal traces spanning the whole path, root to bud.

    Partial traces that die before the bud are dropped; only spanning traces
    feed the measure inference and the ordering test.
    """
    root_node = ctx.nodes[path.root]
    partials: list[tuple[list[tuple[int, int]], bool]] = [
        ([(path.root, it.index)], False) for it in root_node.sequent.antecedent]

    for k in range(len(path.nodes) - 1):
        here, there = path.nodes[k], path.nodes[k + 1]
        position = ctx.nodes[here].premises.index(there)
        pairs = ctx.step_pairs(here, position)
        by_conclusion: dict[int, list] = {}
        for tp in pairs:
            by_conclusion.setdefault(tp.conclusion_index, []).append(tp)
        extended: list[tuple[list[tuple[int, int]], bool]] = []
        for occs, prog in partials:
            cur = occs[-1][1]
            for tp in by_conclusion.get(cur, []):
                extended.append((occs + [(there, tp.premise_index)],
                                 prog or tp.progressing))
        partials = extended

    out = [Trace(path, tuple(occs), prog) for occs, prog in partials]
    out.sort(key=lambda t: (t.root_index, t.bud_index, t.occurrences, t.progressing))
    return out


def trace_summary(path: RootBudPath, ctx: TraceContext) -> set[tuple[int, int, bool]]:
    """Spanning trace links as (root index, bud index, progressing) entries.

    An entry with a given flag is present when some spanning trace between
    the pair carries exactly that flag, so a pair connected by both a
    progressing and a non-progressing trace yields two entries. Consumers
    that only care whether any progressing trace exists can project the
    flag with any().
    """
    out: set[tuple[int, int, bool]] = set()
    for t in traces_along(path, ctx):
        out.add((t.root_index, t.bud_index, t.progressing))
    return out


def progressing_summary(entries: set[tuple[int, int, bool]]) -> set[tuple[int, int, bool]]:
    """Collapse per-flag entries to one entry per pair, progressing if any is."""
    best: dict[tuple[int, int], bool] = {}
    for r, b, f in entries:
        best[(r, b)] = best.get((r, b), False) or f
    return {(r, b, f) for (r, b), f in best.items()}
