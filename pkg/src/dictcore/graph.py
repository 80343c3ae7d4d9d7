"""Directed definition graph and the traversal primitives built on it.

Nodes are dense integer indices.  Adjacency is stored both ways (successors
and predecessors), sorted, so every traversal is deterministic.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

POS_TAGS = ("noun", "verb", "adj", "adv", "other")

_POS_ALIASES = {
    "n": "noun", "noun": "noun",
    "v": "verb", "verb": "verb",
    "a": "adj", "s": "adj", "adj": "adj",
    "r": "adv", "adv": "adv",
}


def normalize_pos(tag: str) -> str:
    """Map WordNet-style short tags (n, v, a, s, r) onto the canonical names."""
    return _POS_ALIASES.get(tag.strip().lower(), "other")


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class SenseNode:
    node: int
    key: str
    lemmas: tuple[str, ...]
    pos: str = "noun"
    sense_rank: int = 1
    gloss: str = ""

    def __post_init__(self):
        if not self.lemmas:
            raise GraphError(f"node {self.key!r} has no lemmas")
        if self.sense_rank < 1:
            raise GraphError(f"node {self.key!r} has sense_rank {self.sense_rank}")

    @property
    def word(self) -> str:
        return self.lemmas[0]


@dataclass(frozen=True)
class BuildReport:
    duplicates: int = 0
    self_loops: int = 0


class DictGraph:
    """Immutable directed graph over ``SenseNode`` objects.

    Build instances with :func:`build_graph`; the constructor assumes its
    adjacency lists are already clean.
    """

    __slots__ = ("nodes", "out_adj", "in_adj", "edge_count", "report", "_index")

    def __init__(self, nodes, out_adj, in_adj, report=None):
        self.nodes: tuple[SenseNode, ...] = tuple(nodes)
        self.out_adj: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in out_adj)
        self.in_adj: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in in_adj)
        self.edge_count: int = sum(len(a) for a in self.out_adj)
        self.report: BuildReport = report or BuildReport()
        self._index: dict[str, int] | None = None

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    def __repr__(self) -> str:
        return f"DictGraph(nodes={self.node_count}, edges={self.edge_count})"

    def edges(self) -> Iterable[tuple[int, int]]:
        for u, succ in enumerate(self.out_adj):
            for v in succ:
                yield u, v

    def has_edge(self, u: int, v: int) -> bool:
        succ = self.out_adj[u]
        # sorted tuples: bisect would do, but out-degrees are small
        return v in succ

    def index_of(self, key: str) -> int:
        if self._index is None:
            self._index = {n.key: n.node for n in self.nodes}
        return self._index[key]

    def key(self, node: int) -> str:
        return self.nodes[node].key

    def word(self, node: int) -> str:
        return self.nodes[node].word

    def with_edges(self, edges: Iterable[tuple[int, int]]) -> "DictGraph":
        """New graph with the same nodes and the given edge set."""
        return build_graph(self.nodes, edges)

    def induced(self, members: Iterable[int]) -> "DictGraph":
        """Subgraph on ``members`` keeping the original node indexing.

        Nodes outside ``members`` stay present but lose all edges, so node ids
        remain valid across stages.
        """
        keep = set(members)
        return build_graph(
            self.nodes,
            ((u, v) for u in sorted(keep) for v in self.out_adj[u] if v in keep),
        )


def build_graph(nodes: Sequence[SenseNode], edges: Iterable[tuple[int, int]]) -> DictGraph:
    """Build a simple directed graph, dropping (and counting) duplicates and self-loops."""
    n = len(nodes)
    for i, node in enumerate(nodes):
        if node.node != i:
            raise GraphError(f"node at position {i} carries index {node.node}")
    out_sets: list[set[int]] = [set() for _ in range(n)]
    duplicates = self_loops = 0
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
        if u == v:
            self_loops += 1
        elif v in out_sets[u]:
            duplicates += 1
        else:
            out_sets[u].add(v)
    in_lists: list[list[int]] = [[] for _ in range(n)]
    out_adj = []
    for u in range(n):
        succ = sorted(out_sets[u])
        out_adj.append(succ)
        for v in succ:
            in_lists[v].append(u)
    return DictGraph(nodes, out_adj, in_lists, BuildReport(duplicates, self_loops))


def simple_nodes(count: int, prefix: str = "w") -> list[SenseNode]:
    """Placeholder nodes ``w0, w1, ...`` for graphs that carry no lexical data."""
    return [SenseNode(i, f"{prefix}{i}", (f"{prefix}{i}",)) for i in range(count)]


def graph_from_edges(count: int, edges: Iterable[tuple[int, int]]) -> DictGraph:
    return build_graph(simple_nodes(count), edges)


def _bfs(adj, start: int) -> set[int]:
    seen: set[int] = set()
    queue = deque(adj[start])
    seen.update(adj[start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def descendants(g: DictGraph, start: int, include_start: bool | None = None) -> set[int]:
    """Nodes reachable from ``start`` along at least one edge.

    By default ``start`` belongs to its own descendant set exactly when it
    lies on a cycle.  Pass ``include_start`` to force either behaviour.
    """
    if not 0 <= start < g.node_count:
        raise GraphError(f"start node {start} outside [0, {g.node_count})")
    reached = _bfs(g.out_adj, start)
    if include_start is True:
        reached.add(start)
    elif include_start is False:
        reached.discard(start)
    return reached


def ancestors(g: DictGraph, target: int) -> set[int]:
    """Nodes from which ``target`` is reachable (same self convention as descendants)."""
    return _bfs(g.in_adj, target)


@dataclass
class SccPartition:
    component_of: list[int]
    components: list[list[int]]
    condensation_edges: list[tuple[int, int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.components)

    def nontrivial(self) -> list[list[int]]:
        return [c for c in self.components if len(c) >= 2]

    def topological_order(self) -> list[int]:
        """Component indices, sources first (Kahn)."""
        k = len(self.components)
        indeg = [0] * k
        succ: list[list[int]] = [[] for _ in range(k)]
        for a, b in self.condensation_edges:
            succ[a].append(b)
            indeg[b] += 1
        queue = deque(i for i in range(k) if indeg[i] == 0)
        order = []
        while queue:
            a = queue.popleft()
            order.append(a)
            for b in succ[a]:
                indeg[b] -= 1
                if indeg[b] == 0:
                    queue.append(b)
        if len(order) != k:
            raise GraphError("condensation is not acyclic")
        return order


def scc(g: DictGraph) -> SccPartition:
    """Strongly connected components (iterative Tarjan).

    Components are returned with sorted members and ordered by their smallest
    member, which keeps indices independent of traversal details.
    """
    n = g.node_count
    adj = g.out_adj
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    found: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            succ = adj[v]
            if i < len(succ):
                work[-1] = (v, i + 1)
                w = succ[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                found.append(sorted(comp))

    found.sort(key=lambda c: c[0])
    component_of = [0] * n
    for ci, comp in enumerate(found):
        for v in comp:
            component_of[v] = ci
    cond = set()
    for u, v in g.edges():
        a, b = component_of[u], component_of[v]
        if a != b:
            cond.add((a, b))
    return SccPartition(component_of, found, sorted(cond))


def degree_histograms(g: DictGraph) -> tuple[dict[int, int], dict[int, int]]:
    """Exact (in-degree, out-degree) histograms as ``{degree: node count}``."""
    ins = Counter(len(a) for a in g.in_adj)
    outs = Counter(len(a) for a in g.out_adj)
    return dict(sorted(ins.items())), dict(sorted(outs.items()))
