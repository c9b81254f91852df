"""Reorganize a pre-proof so that every back-link targets a tree root.

Interior companions are split, deepest first: the companion's subtree moves to
a fresh tree and the original occurrence becomes a bud pointing at the new
root. Sequent labels are preserved verbatim and the renaming of copied nodes
is recorded, so path sets before and after agree modulo that renaming.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Backlink, Node, PreProof


@dataclass(frozen=True)
class NormalizedDigraph:
    nodes: dict[int, Node]
    roots: tuple[int, ...]
    induction_fn: dict[int, int]
    original_root: int
    renaming: dict[int, int]  # copied node id -> source node id in the input

    def node(self, node_id: int) -> Node:
        return self.nodes[node_id]

    def root_of(self) -> dict[int, int]:
        """Map every node to the root of its tree."""
        out: dict[int, int] = {}
        for r in self.roots:
            stack = [r]
            while stack:
                nid = stack.pop()
                out[nid] = r
                stack.extend(self.nodes[nid].premises)
        return out

    def parent_map(self) -> dict[int, int]:
        parents: dict[int, int] = {}
        for nid, node in self.nodes.items():
            for p in node.premises:
                parents[p] = nid
        return parents


@dataclass(frozen=True)
class RootDigraph:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def successors(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v: [] for v in self.vertices}
        for a, b in self.edges:
            out[a].append(b)
        return out


def _depths(nodes: dict[int, Node], parents: dict[int, int]) -> dict[int, int]:
    depth: dict[int, int] = {}

    def of(nid: int) -> int:
        if nid in depth:
            return depth[nid]
        chain = []
        cur = nid
        while cur not in depth and cur in parents:
            chain.append(cur)
            cur = parents[cur]
        base = depth.get(cur, 0)
        if cur not in depth:
            depth[cur] = 0
        for c in reversed(chain):
            base += 1
            depth[c] = base
        return depth[nid]

    for nid in nodes:
        of(nid)
    return depth


def normalize(pp: PreProof) -> NormalizedDigraph:
    """Split interior companions until all of them are tree roots."""
    nodes: dict[int, Node] = dict(pp.nodes)
    induction: dict[int, int] = dict(pp.induction_fn)
    renaming: dict[int, int] = {}
    next_id = max(nodes) + 1 if nodes else 0

    while True:
        parents = {}
        for nid, node in nodes.items():
            for p in node.premises:
                parents[p] = nid
        interior = [c for c in set(induction.values()) if c in parents]
        if not interior:
            break
        depth = _depths(nodes, parents)
        # deepest first so freshly created trees never need re-splitting
        target = max(interior, key=lambda c: (depth[c], c))

        subtree: list[int] = []
        stack = [target]
        while stack:
            nid = stack.pop()
            subtree.append(nid)
            stack.extend(nodes[nid].premises)
        mapping: dict[int, int] = {}
        for nid in sorted(subtree):
            mapping[nid] = next_id
            renaming[next_id] = renaming.get(nid, nid)
            next_id += 1
        for nid in subtree:
            node = nodes[nid]
            nodes[mapping[nid]] = Node(node.sequent, node.rule,
                                       tuple(mapping[p] for p in node.premises))
        new_root = mapping[target]

        # buds inside the copied subtree keep their companions, which are
        # either outside the subtree (already roots) or the split node itself
        for bud in list(induction):
            if bud in mapping and bud != target:
                induction[mapping[bud]] = mapping.get(induction[bud], induction[bud])

        # the original occurrence becomes a bud for the new root
        for nid in subtree:
            if nid != target:
                nodes.pop(nid)
                induction.pop(nid, None)
        nodes[target] = Node(nodes[new_root].sequent, Backlink(new_root), ())
        for bud in list(induction):
            if induction[bud] == target and bud != target:
                induction[bud] = new_root
        induction[target] = new_root

    parents = {}
    for nid, node in nodes.items():
        for p in node.premises:
            parents[p] = nid
    roots = tuple(sorted(n for n in nodes if n not in parents))
    return NormalizedDigraph(nodes, roots, induction, pp.root, renaming)


def root_digraph(nd: NormalizedDigraph) -> RootDigraph:
    vertices = tuple(sorted(nd.nodes))
    edges: list[tuple[int, int]] = []
    for nid, node in sorted(nd.nodes.items()):
        for p in node.premises:
            edges.append((nid, p))
    for bud, root in sorted(nd.induction_fn.items()):
        edges.append((bud, root))
    return RootDigraph(vertices, tuple(edges))


def preproof_digraph(pp: PreProof) -> RootDigraph:
    """The same view over an unnormalized pre-proof, for path comparisons."""
    vertices = tuple(sorted(pp.nodes))
    edges: list[tuple[int, int]] = []
    for nid, node in sorted(pp.nodes.items()):
        for p in node.premises:
            edges.append((nid, p))
    for bud, comp in sorted(pp.induction_fn.items()):
        edges.append((bud, comp))
    return RootDigraph(vertices, tuple(edges))
