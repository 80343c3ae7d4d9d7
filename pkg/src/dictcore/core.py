"""Dictionary core: the node set shared by (almost) every descendant set.

Two routes are provided.  :func:`sampled_core` intersects the descendant sets
of a random sample of start words.  :func:`exact_core` counts, for every node,
how many nodes reach it, using bitset unions over the SCC condensation, and is
used to check the sampled answer.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import DictGraph, GraphError, scc
from .ingest import WordList

log = logging.getLogger(__name__)

DEFAULT_MEMORY_CAP = 2 * 1024 ** 3


class CoreError(RuntimeError):
    pass


@dataclass
class ConvergenceProfile:
    start: int
    cumulative: list[int]
    half_height_distance: int
    saturated: bool

    @property
    def total(self) -> int:
        return self.cumulative[-1] if self.cumulative else 0


@dataclass
class CoreSet:
    members: frozenset[int]
    sample: list[int] = field(default_factory=list)
    membership_fraction: dict[int, float] = field(default_factory=dict)
    degenerate_samples: list[int] = field(default_factory=list)
    profiles: list[ConvergenceProfile] = field(default_factory=list)
    threshold: float = 1.0
    method: str = "sampled"

    def __len__(self):
        return len(self.members)

    def sorted_members(self) -> list[int]:
        return sorted(self.members)


def _levels(g: DictGraph, start: int, max_depth: int | None):
    """Level-synchronous BFS.  Returns (reached set, per-level new counts, saturated)."""
    adj = g.out_adj
    seen: set[int] = set()
    frontier = [start]
    counts: list[int] = []
    depth = 0
    while frontier and (max_depth is None or depth < max_depth):
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        depth += 1
        if not nxt:
            return seen, counts, True
        counts.append(len(nxt))
        frontier = nxt
    return seen, counts, not frontier or _exhausted(adj, frontier, seen)


def _exhausted(adj, frontier, seen) -> bool:
    return all(v in seen for u in frontier for v in adj[u])


def _profile(start, counts, saturated, max_depth) -> ConvergenceProfile:
    cumulative = []
    running = 0
    for c in counts:
        running += c
        cumulative.append(running)
    if saturated and max_depth is not None:
        cumulative.extend([running] * (max_depth - len(cumulative)))
    final = cumulative[-1] if cumulative else 0
    half = 0
    for d, c in enumerate(cumulative, 1):
        if 2 * c >= final:
            half = d
            break
    return ConvergenceProfile(start, cumulative, half, saturated)


def convergence_profile(g: DictGraph, start: int, max_depth: int = 60) -> ConvergenceProfile:
    """Number of distinct nodes reachable within each distance 1..max_depth.

    ``start`` is counted only when a cycle leads back to it.  The half-height
    distance is the first depth whose count reaches half of the final total.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    if not 0 <= start < g.node_count:
        raise GraphError(f"start node {start} outside [0, {g.node_count})")
    _, counts, saturated = _levels(g, start, max_depth)
    return _profile(start, counts, saturated, max_depth)


def sampled_core(
    g: DictGraph,
    sample_size: int = 100,
    seed: int = 0,
    membership_threshold: float = 1.0,
    degeneracy_fraction: float = 0.01,
    max_depth: int = 60,
) -> CoreSet:
    """Core as the (thresholded) intersection of sampled descendant sets.

    Samples whose descendant set is smaller than ``degeneracy_fraction`` of
    the graph are set aside as small isolated loops.  A node joins the core
    when it lies in at least ``membership_threshold`` of the remaining sets.
    """
    n = g.node_count
    if not 0 < sample_size <= n:
        raise ValueError(f"sample_size must be in [1, {n}]")
    if not 0.0 < membership_threshold <= 1.0:
        raise ValueError("membership_threshold must be in (0, 1]")
    rng = np.random.default_rng(seed)
    sample = sorted(int(x) for x in rng.choice(n, size=sample_size, replace=False))
    cutoff = degeneracy_fraction * n
    hits = np.zeros(n, dtype=np.int64)
    profiles = []
    degenerate = []
    used = 0
    for s in sample:
        reached, counts, saturated = _levels(g, s, None)
        profiles.append(_profile(s, counts[:max_depth], saturated and len(counts) <= max_depth, max_depth))
        if len(reached) < cutoff:
            degenerate.append(s)
            continue
        used += 1
        hits[np.fromiter(reached, dtype=np.int64, count=len(reached))] += 1
    if used == 0:
        raise CoreError(
            f"all {sample_size} samples reach fewer than {cutoff:g} nodes; the graph has no core"
        )
    need = math.ceil(membership_threshold * used - 1e-9)
    members = frozenset(int(v) for v in np.flatnonzero(hits >= need))
    fractions = {int(v): float(hits[v]) / used for v in np.flatnonzero(hits)}
    if degenerate:
        log.info("%d of %d samples were degenerate", len(degenerate), sample_size)
    if not members:
        log.warning("no node lies in %.0f%% of the %d usable descendant sets; the core is empty",
                    100 * membership_threshold, used)
    return CoreSet(members, sample, fractions, degenerate, profiles, membership_threshold, "sampled")


def exact_core(
    g: DictGraph,
    coverage_fraction: float = 0.99,
    memory_cap: int = DEFAULT_MEMORY_CAP,
) -> CoreSet:
    """Nodes reachable from at least ``coverage_fraction`` of all nodes.

    A node counts as reaching itself only if it lies on a cycle, matching
    :func:`dictcore.graph.descendants`.  Ancestor sets are built per SCC as
    integer bitsets in topological order, so memory grows as
    ``#SCC * node_count / 8`` bytes; projections above ``memory_cap`` are
    refused.
    """
    n = g.node_count
    part = scc(g)
    projected = len(part.components) * n / 8
    if projected > memory_cap:
        raise CoreError(
            f"exact core needs ~{projected / 2**20:.0f} MiB of bitsets (cap "
            f"{memory_cap / 2**20:.0f} MiB); use sampled_core instead"
        )
    preds: list[list[int]] = [[] for _ in part.components]
    for a, b in part.condensation_edges:
        preds[b].append(a)
    # anc[c]: bitset of nodes reaching every member of component c
    anc: list[int] = [0] * len(part.components)
    own: list[int] = [0] * len(part.components)
    for ci, comp in enumerate(part.components):
        bits = 0
        for v in comp:
            bits |= 1 << v
        own[ci] = bits
    for ci in part.topological_order():
        bits = 0
        for p in preds[ci]:
            bits |= anc[p] | own[p]
        if len(part.components[ci]) > 1:
            bits |= own[ci]
        anc[ci] = bits
    need = coverage_fraction * n
    members = set()
    fractions = {}
    for ci, comp in enumerate(part.components):
        count = anc[ci].bit_count()
        if count:
            for v in comp:
                fractions[v] = count / n
        if count >= need - 1e-9:
            members.update(comp)
    return CoreSet(frozenset(members), [], fractions, [], [], coverage_fraction, "exact")


def overlap_percent(count: int, column_size: int) -> int:
    """Integer percent of the column list covered, rounding halves up."""
    if column_size <= 0:
        raise ValueError("column list is empty")
    return math.floor(100 * count / column_size + 0.5)


@dataclass
class OverlapTable:
    names: list[str]
    sizes: list[int]
    counts: dict[tuple[int, int], int]

    def percent(self, i: int, j: int) -> int:
        """Overlap of row list i with column list j, as a share of column j."""
        return overlap_percent(self.counts[(i, j)], self.sizes[j])

    def rows(self) -> list[list[str]]:
        """Upper-triangular rendering: diagonal sizes, ``count (pct%)`` above."""
        out = []
        k = len(self.names)
        for i in range(k):
            row = [self.names[i]]
            for j in range(k):
                if j < i:
                    row.append("")
                elif j == i:
                    row.append(str(self.sizes[i]))
                else:
                    row.append(f"{self.counts[(i, j)]} ({self.percent(i, j)}%)")
            out.append(row)
        return out


def wordlist_overlap(core_words: WordList, lists: Sequence[WordList]) -> OverlapTable:
    """Pairwise intersections of the core word list with other word lists."""
    if not lists:
        raise ValueError("need at least one comparison list")
    everything = [core_words, *lists]
    for wl in everything:
        if not wl.words:
            raise ValueError(f"word list {wl.name!r} is empty")
    counts = {}
    for i, a in enumerate(everything):
        for j, b in enumerate(everything):
            if i < j:
                counts[(i, j)] = len(a.words & b.words)
    return OverlapTable([w.name for w in everything], [len(w) for w in everything], counts)


def core_word_list(g: DictGraph, core: CoreSet, name: str = "Core") -> WordList:
    return WordList(name, frozenset(g.word(v).lower() for v in core.members))
