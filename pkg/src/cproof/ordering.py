"""Multiset extension orderings: the standard one and the trace-linked one.

The standard relation compares two multisets over an arbitrary strict base
order. The trace-linked variant compares the measures at the two ends of a
root-to-bud path: items linked by a non-progressing trace may cancel
pairwise, the remaining root side must be nonempty, and every remaining bud
item must be covered by a progressing trace from a remaining root item.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .analysis import RootBudPath
from .measures import Measure


@dataclass(frozen=True)
class BaseOrder:
    strictly_less: Callable[[object, object], bool]


def _sub_multisets(items: Counter) -> Iterable[Counter]:
    keys = sorted(items)
    ranges = [range(items[k] + 1) for k in keys]
    for combo in itertools.product(*ranges):
        yield Counter({k: c for k, c in zip(keys, combo) if c})


def multiset_less(B: Counter, A: Counter, order: BaseOrder) -> bool:
    """True when B is below A in the standard multiset extension.

    Decided by searching over nonempty sub-multisets X of A: with
    B = (A - X) + Y forced, check that every element of Y sits below some
    element of X.
    """
    B = Counter(B)
    A = Counter(A)
    for X in _sub_multisets(A):
        if not X:
            continue
        rest = A - X
        if rest - B != Counter():
            continue
        Y = B - rest
        if all(any(order.strictly_less(y, x) for x in X) for y in Y):
            return True
    return False


@dataclass(frozen=True)
class PathComparison:
    path: Optional[RootBudPath]
    bud_side: Measure
    root_side: Measure
    matching: tuple[tuple[int, int, bool], ...]  # (bud index, root index, progressing)
    valid: bool


def compare_measures(entries: set[tuple[int, int, bool]], root_items: Counter,
                     bud_items: Counter) -> tuple[bool, tuple[tuple[int, int, bool], ...]]:
    """Search for a successful cancellation and coverage of the two measures.

    `entries` holds (root index, bud index, progressing) trace links. Returns
    the verdict and, when valid, the witnessing matching: cancelled pairs
    with flag False followed by coverage pairs with flag True, both as
    (bud index, root index, flag).
    """
    nonprog = {(r, b) for r, b, f in entries if not f}
    prog = {(r, b) for r, b, f in entries if f}

    bud_list: list[int] = []
    for idx in sorted(bud_items):
        bud_list.extend([idx] * bud_items[idx])

    def cover(x_residue: Counter, y_residue: list[int],
              cancelled: list[tuple[int, int]]) -> Optional[tuple]:
        positives = +x_residue  # drop items fully consumed by cancellation
        if not positives:
            return None
        for y in y_residue:
            if not any((x, y) in prog for x in positives):
                return None
        matching = [(b, r, False) for b, r in cancelled]
        for y in y_residue:
            x = min(x for x in positives if (x, y) in prog)
            matching.append((y, x, True))
        return tuple(matching)

    def search(pos: int, x_left: Counter, y_residue: list[int],
               cancelled: list[tuple[int, int]]) -> Optional[tuple]:
        if pos == len(bud_list):
            return cover(x_left, y_residue, cancelled)
        y = bud_list[pos]
        # leave this bud item in the residue
        got = search(pos + 1, x_left, y_residue + [y], cancelled)
        if got is not None:
            return got
        # or cancel it against a non-progressing-linked root item
        for x in sorted(x_left):
            if x_left[x] > 0 and (x, y) in nonprog:
                x_left[x] -= 1
                got = search(pos + 1, x_left, y_residue, cancelled + [(y, x)])
                x_left[x] += 1
                if got is not None:
                    return got
        return None

    found = search(0, Counter(root_items), [], [])
    if found is None:
        return False, ()
    return True, found


def trace_multiset_less(path: RootBudPath, summary: set[tuple[int, int, bool]],
                        m_root: Measure, m_bud: Measure) -> PathComparison:
    """Decide whether the bud side sits below the root side along this path."""
    valid, matching = compare_measures(summary, m_root.counter(), m_bud.counter())
    return PathComparison(path, m_bud, m_root, matching, valid)
