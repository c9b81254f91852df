"""Strongly connected components and root-to-bud path enumeration."""

from __future__ import annotations

from dataclasses import dataclass

from .normalize import NormalizedDigraph, RootDigraph


@dataclass(frozen=True)
class SccPartition:
    components: tuple[tuple[int, ...], ...]
    component_of: dict[int, int]
    cyclic: tuple[bool, ...]

    def is_cyclic(self, vertex: int) -> bool:
        return self.cyclic[self.component_of[vertex]]


def strongly_connected(vertices, successors) -> list[list[int]]:
    """Iterative Tarjan; components come out in reverse topological order."""
    index: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    counter = [0]
    components: list[list[int]] = []

    for start in vertices:
        if start in index:
            continue
        work = [(start, iter(successors(start)))]
        index[start] = lowlink[start] = counter[0]
        counter[0] += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = lowlink[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
    return components


def sccs(g: RootDigraph) -> SccPartition:
    succ = g.successors()
    comps = strongly_connected(sorted(g.vertices), lambda v: succ[v])
    comps = sorted((tuple(sorted(c)) for c in comps), key=lambda c: c[0])
    component_of = {v: i for i, c in enumerate(comps) for v in c}
    edge_set = set(g.edges)
    cyclic = tuple(
        len(c) > 1 or (c[0], c[0]) in edge_set
        for c in comps)
    return SccPartition(tuple(comps), component_of, cyclic)


@dataclass(frozen=True)
class RootBudPath:
    root: int
    bud: int
    nodes: tuple[int, ...]
    companion: int


def rb_paths(nd: NormalizedDigraph, part: SccPartition) -> list[RootBudPath]:
    """Tree paths from a root to a bud, both inside the same cyclic SCC.

    Ordered by root id, then by descending bud id, matching the order in
    which the validation report lists them.
    """
    parents = nd.parent_map()
    root_of = nd.root_of()
    out: list[RootBudPath] = []
    for bud in sorted(nd.induction_fn):
        if not part.is_cyclic(bud):
            continue
        root = root_of[bud]
        if part.component_of[root] != part.component_of[bud]:
            continue
        path = [bud]
        cur = bud
        while cur != root:
            cur = parents[cur]
            path.append(cur)
        out.append(RootBudPath(root, bud, tuple(reversed(path)), nd.induction_fn[bud]))
    out.sort(key=lambda p: (p.root, -p.bud))
    return out
