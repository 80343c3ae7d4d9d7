"""Split the core into tight semantic components by keeping short-loop edges only."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .core import CoreSet
from .graph import DictGraph, scc
from .loops import INF, edge_girth


class DecompositionError(RuntimeError):
    pass


@dataclass
class Component:
    id: int
    members: list[int]
    edges: list[tuple[int, int]]
    lineage: str = "root"

    def __len__(self):
        return len(self.members)


@dataclass
class ComponentSet:
    components: list[Component]
    filter_length: int = 5
    refine_threshold: int = 20
    refine_length: int = 4
    first_pass_sizes: list[int] = field(default_factory=list)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def label_of(self) -> dict[int, int]:
        return {v: c.id for c in self.components for v in c.members}

    def sizes(self) -> list[int]:
        return [len(c) for c in self.components]


def filter_by_girth(g: DictGraph, scope: Iterable[int] | None = None, length: int = 5) -> DictGraph:
    """Keep only the edges inside ``scope`` whose shortest loop is at most ``length``."""
    girths = edge_girth(g, scope, max_probe_depth=length)
    return g.with_edges(girths.edges_within(length))


def _components_of(filtered: DictGraph, scope: set[int] | None):
    part = scc(filtered)
    out = []
    for comp in part.nontrivial():
        if scope is not None and comp[0] not in scope:
            continue
        members = set(comp)
        edges = [(u, v) for u in comp for v in filtered.out_adj[u] if v in members]
        out.append((comp, edges))
    return out


def decompose_core(
    g: DictGraph,
    core: CoreSet | Iterable[int],
    filter_length: int = 5,
    refine_threshold: int = 20,
    refine_length: int = 4,
    refine_to_fixpoint: bool = False,
) -> ComponentSet:
    """Strongly connected pieces of the core after dropping long-loop edges.

    Components larger than ``refine_threshold`` are filtered again internally
    at ``refine_length`` and re-split (once, or until nothing changes with
    ``refine_to_fixpoint``).  Singleton components are discarded.
    """
    members = set(core.members if isinstance(core, CoreSet) else core)
    if not members:
        raise DecompositionError("core is empty")
    filtered = filter_by_girth(g, members, filter_length)
    first = _components_of(filtered, members)
    first_sizes = [len(c) for c, _ in first]

    final: list[tuple[list[int], list[tuple[int, int]], str]] = []
    pending = [(comp, edges, "root", i) for i, (comp, edges) in enumerate(first)]
    while pending:
        again = []
        for comp, edges, lineage, origin in pending:
            if len(comp) <= refine_threshold:
                final.append((comp, edges, lineage))
                continue
            sub = filtered.with_edges(edges)
            refined = _components_of(filter_by_girth(sub, comp, refine_length), set(comp))
            tag = f"refined-from:{origin}"
            unchanged = len(refined) == 1 and len(refined[0][0]) == len(comp)
            if refine_to_fixpoint and not unchanged:
                again.extend((c, e, tag, origin) for c, e in refined)
            else:
                final.extend((c, e, tag) for c, e in refined)
        pending = again

    if not final:
        raise DecompositionError(
            f"no strongly connected component survives the length-{filter_length} filter"
        )
    final.sort(key=lambda t: t[0][0])
    comps = [Component(i, c, sorted(e), lin) for i, (c, e, lin) in enumerate(final)]
    return ComponentSet(comps, filter_length, refine_threshold, refine_length, first_sizes)


def longest_cycle(members: list[int], edges: list[tuple[int, int]], budget: int = 200_000):
    """Length of the longest simple cycle, by exhaustive DFS within a step budget.

    Returns ``(length, exhaustive)``; when the budget runs out the length is
    a lower bound.
    """
    adj: dict[int, list[int]] = {v: [] for v in members}
    for u, v in edges:
        adj[u].append(v)
    order = sorted(members)
    best = 0
    steps = 0
    for s in order:
        # cycles whose smallest node is s
        stack = [(s, iter(adj[s]))]
        on_path = {s}
        while stack:
            steps += 1
            if steps > budget:
                return best, False
            v, it = stack[-1]
            w = next(it, None)
            if w is None:
                stack.pop()
                on_path.discard(v)
                continue
            if w == s:
                best = max(best, len(stack))
            elif w > s and w not in on_path:
                on_path.add(w)
                stack.append((w, iter(adj[w])))
    return best, True


@dataclass
class ComponentSummary:
    id: int
    lineage: str
    size: int
    words: list[str]
    edge_count: int
    min_girth: int
    max_girth: int
    longest_cycle: int
    longest_exhaustive: bool


def component_report(cs: ComponentSet, g: DictGraph) -> list[ComponentSummary]:
    """Per-component summary: size, words, edges, girth range and longest loop."""
    out = []
    for c in cs:
        if len(c) < 2:
            continue
        sub = g.with_edges(c.edges)
        girths = [x for x in edge_girth(sub, c.members).girth_of.values() if x != INF]
        longest, exhaustive = longest_cycle(c.members, c.edges)
        out.append(ComponentSummary(
            c.id, c.lineage, len(c), [g.word(v) for v in c.members], len(c.edges),
            int(min(girths)) if girths else 0, int(max(girths)) if girths else 0,
            longest, exhaustive,
        ))
    return out


def format_component_report(rows: list[ComponentSummary]) -> str:
    lines = []
    for r in rows:
        bound = "" if r.longest_exhaustive else ">="
        lines.append(
            f"component {r.id} [{r.lineage}] size={r.size} edges={r.edge_count} "
            f"girth={r.min_girth}..{r.max_girth} longest_loop={bound}{r.longest_cycle}"
        )
        lines.append("  " + ", ".join(r.words))
    return "\n".join(lines) + ("\n" if lines else "")


def components_to_json(cs: ComponentSet, g: DictGraph) -> str:
    doc = {
        "filter_length": cs.filter_length,
        "refine_threshold": cs.refine_threshold,
        "refine_length": cs.refine_length,
        "components": [
            {
                "id": c.id,
                "lineage": c.lineage,
                "members": [g.key(v) for v in c.members],
                "edges": [[g.key(u), g.key(v)] for u, v in c.edges],
            }
            for c in cs
        ],
    }
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def components_from_json(text: str, g: DictGraph) -> ComponentSet:
    doc = json.loads(text)
    comps = [
        Component(
            c["id"],
            sorted(g.index_of(k) for k in c["members"]),
            sorted((g.index_of(a), g.index_of(b)) for a, b in c["edges"]),
            c.get("lineage", "root"),
        )
        for c in doc["components"]
    ]
    return ComponentSet(comps, doc.get("filter_length", 5),
                        doc.get("refine_threshold", 20), doc.get("refine_length", 4))


_GIRTH_COLORS = {2: "red", 3: "green", 4: "blue", 5: "orange"}


def components_to_dot(cs: ComponentSet, g: DictGraph) -> str:
    """Graphviz rendering with edges coloured by the shortest loop they close."""
    lines = ["digraph components {"]
    for c in cs:
        lines.append(f"  subgraph cluster_{c.id} {{")
        lines.append(f'    label="{c.id}";')
        for v in c.members:
            lines.append(f'    n{v} [label="{_dot_escape(g.word(v))}"];')
        lines.append("  }")
        girths = edge_girth(g.with_edges(c.edges), c.members)
        for u, v in c.edges:
            colour = _GIRTH_COLORS.get(int(girths[(u, v)]) if girths[(u, v)] != INF else 0, "gray")
            lines.append(f"  n{u} -> n{v} [color={colour}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')
