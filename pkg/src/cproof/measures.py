"""Measure inference: attach a multiset of antecedent indices to every root.

The initial pass adds, for every root-to-bud path and every spanning trace
along it, the trace's root-side index to the path root's measure and its
bud-side index to the companion's measure. When a comparison later fails,
refinement grows the failing root's measure one item at a time: first indices
absent from the measure, then duplicate copies of present ones, capped at a
multiple of the antecedent size so the loop always terminates.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable

from .analysis import RootBudPath
from .normalize import NormalizedDigraph


@dataclass(frozen=True)
class Measure:
    root: int
    items: tuple[int, ...]  # sorted, with multiplicity

    def counter(self) -> Counter:
        return Counter(self.items)


@dataclass(frozen=True)
class MeasureAssignment:
    per_root: dict[int, Measure]

    def items_of(self, root: int) -> tuple[int, ...]:
        return self.per_root[root].items


def _measure(root: int, counts: Counter) -> Measure:
    items: list[int] = []
    for idx in sorted(counts):
        items.extend([idx] * counts[idx])
    return Measure(root, tuple(items))


SummaryMap = dict[tuple[int, int], set[tuple[int, int, bool]]]


def infer_measures(nd: NormalizedDigraph, paths: list[RootBudPath],
                   summaries: SummaryMap) -> MeasureAssignment:
    """Initial measure assignment from the spanning-trace summaries.

    Additions are set-like: an index enters a measure at most once here, no
    matter how many entries witness it. Iteration order does not matter.
    """
    counts: dict[int, Counter] = {r: Counter() for r in nd.roots}
    for path in paths:
        for root_idx, bud_idx, _ in summaries[(path.root, path.bud)]:
            counts[path.root][root_idx] = 1
            counts[path.companion][bud_idx] = 1
    return MeasureAssignment({r: _measure(r, c) for r, c in counts.items()})


def refine_measures(nd: NormalizedDigraph, paths: list[RootBudPath],
                    summaries: SummaryMap, ma: MeasureAssignment,
                    path_valid: Callable[[RootBudPath, MeasureAssignment], bool],
                    cap_factor: int = 2) -> MeasureAssignment:
    """Grow measures until every path passes or the caps are reached.

    Additions are monotone (measures only grow) and deterministic: the first
    failing path in report order is treated first, candidates are tried in
    ascending index order with absent indices before duplications, and every
    addition is followed by a full re-evaluation so that knock-on failures in
    paths ending at the grown root are processed in turn.
    """
    counts = {r: Counter(m.items) for r, m in ma.per_root.items()}

    def assignment() -> MeasureAssignment:
        return MeasureAssignment({r: _measure(r, c) for r, c in counts.items()})

    def cap(root: int) -> int:
        return cap_factor * max(1, len(nd.nodes[root].sequent.antecedent))

    while True:
        current = assignment()
        failing = [p for p in paths if not path_valid(p, current)]
        if not failing:
            return current
        progressed = False
        for path in failing:
            r = path.root
            ant = sorted(nd.nodes[r].sequent.indices())
            if sum(counts[r].values()) >= cap(r):
                continue
            absent = [i for i in ant if counts[r][i] == 0]
            candidates = absent + [i for i in ant if counts[r][i] > 0]
            for idx in candidates:
                counts[r][idx] += 1
                progressed = True
                if path_valid(path, assignment()):
                    break
                if sum(counts[r].values()) >= cap(r):
                    break
            if progressed:
                break
        if not progressed:
            return assignment()
