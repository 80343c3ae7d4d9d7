"""Definitional loops: per-edge shortest cycles and a degree-preserving null model."""
from __future__ import annotations

import logging
import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .graph import DictGraph, build_graph, scc

log = logging.getLogger(__name__)

INF = math.inf


@dataclass
class EdgeGirthMap:
    """Shortest directed cycle length through each edge (``inf`` if none found)."""

    girth_of: dict[tuple[int, int], float]
    max_probe_depth: int | None = None

    def __len__(self):
        return len(self.girth_of)

    def __getitem__(self, edge):
        return self.girth_of[edge]

    def items(self):
        return self.girth_of.items()

    def edges_within(self, length: int) -> list[tuple[int, int]]:
        return sorted(e for e, g in self.girth_of.items() if g <= length)


@dataclass
class LoopHistogram:
    counts: dict[int, int]
    infinite: int = 0
    capped: bool = False

    @property
    def total(self) -> int:
        return sum(self.counts.values()) + self.infinite

    def short(self, limit: int = 5) -> int:
        return sum(c for k, c in self.counts.items() if k <= limit)

    def long(self, limit: int = 5) -> int:
        return sum(c for k, c in self.counts.items() if k > limit)


def _girths_from(head, preds, out_adj, scope, cap):
    """BFS from ``head`` until every in-scope predecessor is found or cap is hit.

    Returns ``{pred: 1 + dist(head, pred)}`` for the predecessors reached.
    """
    wanted = set(preds)
    found = {}
    if head in wanted:
        wanted.discard(head)
    dist = {head: 0}
    frontier = [head]
    depth = 0
    while frontier and wanted:
        depth += 1
        if cap is not None and depth + 1 > cap:
            break
        nxt = []
        for u in frontier:
            for w in out_adj[u]:
                if w in dist or (scope is not None and w not in scope):
                    continue
                dist[w] = depth
                nxt.append(w)
                if w in wanted:
                    wanted.discard(w)
                    found[w] = depth + 1
        frontier = nxt
    return found


def _girth_chunk(args):
    heads, in_adj, out_adj, scope, cap = args
    out = []
    for v in heads:
        preds = [u for u in in_adj[v] if scope is None or u in scope]
        found = _girths_from(v, preds, out_adj, scope, cap)
        out.extend(((u, v), found.get(u, INF)) for u in preds)
    return out


def edge_girth(
    g: DictGraph,
    subgraph_nodes: Iterable[int] | None = None,
    max_probe_depth: int | None = None,
    workers: int = 1,
) -> EdgeGirthMap:
    """Length of the shortest directed cycle through each edge.

    For an edge u->v this is ``1 + dist(v, u)``; one BFS per distinct edge
    head serves all of its incoming edges.  With ``subgraph_nodes`` both the
    edges considered and the paths searched stay inside the induced subgraph.
    Cycles longer than ``max_probe_depth`` are reported as ``inf``.
    """
    if max_probe_depth is not None and max_probe_depth < 2:
        raise ValueError("max_probe_depth must be >= 2")
    scope = None if subgraph_nodes is None else frozenset(subgraph_nodes)
    heads = sorted(range(g.node_count) if scope is None else scope)
    heads = [v for v in heads if g.in_adj[v]]
    if workers > 1 and len(heads) > 256:
        step = math.ceil(len(heads) / (workers * 4))
        chunks = [(heads[i:i + step], g.in_adj, g.out_adj, scope, max_probe_depth)
                  for i in range(0, len(heads), step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pairs = [p for part in pool.map(_girth_chunk, chunks) for p in part]
    else:
        pairs = _girth_chunk((heads, g.in_adj, g.out_adj, scope, max_probe_depth))
    return EdgeGirthMap(dict(sorted(pairs)), max_probe_depth)


def loop_histogram(girths: EdgeGirthMap) -> LoopHistogram:
    """Count edges by the length of the shortest loop they belong to."""
    finite = Counter(int(x) for x in girths.girth_of.values() if x != INF)
    infinite = sum(1 for x in girths.girth_of.values() if x == INF)
    return LoopHistogram(dict(sorted(finite.items())), infinite, girths.max_probe_depth is not None)


def nodes_in_loops(g: DictGraph) -> set[int]:
    """Nodes lying on at least one directed cycle."""
    return {v for comp in scc(g).nontrivial() for v in comp}


@dataclass
class RandomizeResult:
    graph: DictGraph
    swaps: int
    attempts: int
    target: int
    warnings: list[str] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.swaps >= self.target


def randomize_degree_preserving(
    g: DictGraph,
    swap_factor: float = 10,
    seed: int = 0,
    max_attempts_factor: float = 100,
    subgraph_nodes: Iterable[int] | None = None,
) -> RandomizeResult:
    """Rewire edges by directed double swaps, keeping every in/out degree.

    Picks two edges (a->b), (c->d) uniformly and replaces them with (a->d),
    (c->b) unless that would make a self-loop or a duplicate edge.  Runs until
    ``swap_factor * edge_count`` swaps succeed or the attempt budget
    (``max_attempts_factor`` times the target) is spent.

    With ``subgraph_nodes`` only the induced subgraph is rewired and returned
    (edges leaving the subset are dropped).
    """
    if subgraph_nodes is not None:
        g = g.induced(subgraph_nodes)
    rng = random.Random(seed)
    edges = list(g.edges())
    m = len(edges)
    target = int(round(swap_factor * m))
    result_warnings: list[str] = []
    if m < 2:
        msg = "fewer than two edges; nothing to swap"
        log.warning(msg)
        return RandomizeResult(g, 0, 0, target, [msg])
    present = set(edges)
    budget = int(max_attempts_factor * max(target, 1))
    swaps = attempts = 0
    while swaps < target and attempts < budget:
        attempts += 1
        i = rng.randrange(m)
        j = rng.randrange(m)
        if i == j:
            continue
        a, b = edges[i]
        c, d = edges[j]
        if a == d or c == b or (a, d) in present or (c, b) in present:
            continue
        present.discard((a, b))
        present.discard((c, d))
        present.add((a, d))
        present.add((c, b))
        edges[i] = (a, d)
        edges[j] = (c, b)
        swaps += 1
    if swaps < target:
        msg = f"attempt budget exhausted: {swaps} of {target} swaps after {attempts} attempts"
        log.warning(msg)
        result_warnings.append(msg)
    return RandomizeResult(build_graph(g.nodes, edges), swaps, attempts, target, result_warnings)
