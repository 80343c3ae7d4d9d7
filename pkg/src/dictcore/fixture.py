"""Synthetic dictionary with planted structure, for tests and demos.

Layout of the noun graph:

* a core made of tight clusters, each a bidirectional path plus short chords
  (every internal edge closes a loop of length 2 or 3);
* clusters placed on a ring and linked only forward by 1..3 ring steps, so
  any loop using an inter-cluster link wraps the whole ring and is long;
* feeder words whose glosses point into the core or to earlier feeders;
* a handful of words stuck in small isolated loops or with empty glosses.

A few verb records and dangling links exercise the ingestion filters.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ingest import DateRecord, GlossRecord, WordList, write_dates, write_gloss_file

FILLER = ("a", "the", "of", "or", "that", "in")


@dataclass
class Fixture:
    records: list[GlossRecord]
    dates: list[DateRecord]
    word_lists: list[WordList]
    closure: list[str]
    clusters: list[list[str]]
    noun_edges: int
    unresolved: int
    cross_pos: int
    seed: int
    cluster_years: list[int] = field(default_factory=list)

    @property
    def noun_nodes(self) -> int:
        return sum(1 for r in self.records if r.pos == "n")

    def manifest(self) -> dict:
        return {
            "seed": self.seed,
            "records": len(self.records),
            "noun_nodes": self.noun_nodes,
            "noun_edges": self.noun_edges,
            "unresolved_links": self.unresolved,
            "cross_pos_links": self.cross_pos,
            "closure": self.closure,
            "clusters": self.clusters,
            "cluster_years": self.cluster_years,
        }

    def write(self, directory) -> dict[str, Path]:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        paths = {
            "gloss": d / "glosses.xwn",
            "dates": d / "dates.tsv",
            "manifest": d / "fixture_manifest.json",
        }
        write_gloss_file(paths["gloss"], self.records)
        write_dates(paths["dates"], self.dates)
        for wl in self.word_lists:
            p = d / f"wordlist_{wl.name}.txt"
            p.write_text("".join(f"{w}\n" for w in sorted(wl.words)), encoding="utf-8")
            paths[f"wordlist_{wl.name}"] = p
        paths["manifest"].write_text(json.dumps(self.manifest(), indent=1) + "\n", encoding="utf-8")
        return paths


def _cluster_sizes(rng, total_core, n_clusters):
    sizes = rng.integers(3, 16, size=n_clusters)
    # a few large clusters exercise the refinement pass
    big = rng.choice(n_clusters, size=max(1, n_clusters // 15), replace=False)
    sizes[big] = rng.integers(21, 27, size=len(big))
    scale = total_core / sizes.sum()
    sizes = np.maximum(3, np.round(sizes * scale)).astype(int)
    sizes[big] = np.maximum(sizes[big], 21)
    return [int(s) for s in sizes]


def make_fixture(
    n_nodes: int = 2000,
    n_clusters: int = 60,
    core_size: int = 600,
    seed: int = 2024,
    n_verbs: int = 40,
) -> Fixture:
    rng = np.random.default_rng(seed)
    sizes = _cluster_sizes(rng, core_size, n_clusters)
    n_core = sum(sizes)
    n_isolated = 7  # two 2-cycles and a 3-cycle
    n_to_isolated = 4
    n_empty = 6
    n_feed = n_nodes - n_core - n_isolated - n_to_isolated - n_empty
    if n_feed < 1:
        raise ValueError("n_nodes too small for the requested core")

    words = [f"w{i:04d}" for i in rng.permutation(n_nodes)]
    edges: set[tuple[int, int]] = set()

    clusters: list[list[int]] = []
    start = 0
    for s in sizes:
        members = list(range(start, start + s))
        start += s
        clusters.append(members)
        for a, b in zip(members, members[1:]):
            edges.add((a, b))
            edges.add((b, a))
        for a, c in zip(members, members[2:]):
            if rng.random() < 0.3:
                edges.add((a, c) if rng.random() < 0.5 else (c, a))
    k = len(clusters)
    for i, members in enumerate(clusters):
        targets = [1] + [int(x) for x in rng.integers(1, 4, size=int(rng.integers(0, 2)))]
        for step in targets:
            dst = clusters[(i + step) % k]
            edges.add((int(rng.choice(members)), int(rng.choice(dst))))

    iso = list(range(n_core, n_core + n_isolated))
    edges.update({(iso[0], iso[1]), (iso[1], iso[0]), (iso[2], iso[3]), (iso[3], iso[2]),
                  (iso[4], iso[5]), (iso[5], iso[6]), (iso[6], iso[4])})
    to_iso = list(range(iso[-1] + 1, iso[-1] + 1 + n_to_isolated))
    for u in to_iso:
        edges.add((u, int(rng.choice(iso))))
    empty_start = to_iso[-1] + 1
    feed_start = empty_start + n_empty

    # in-degree skew: core targets drawn with Zipf-like weights
    core_weights = 1.0 / np.arange(1, n_core + 1) ** 0.8
    core_weights = rng.permutation(core_weights)
    core_weights /= core_weights.sum()
    for j, u in enumerate(range(feed_start, n_nodes)):
        deg = 1 + int(rng.poisson(2.0))
        for _ in range(deg):
            if j > 20 and rng.random() < 0.35:
                v = int(rng.integers(feed_start, u))
            else:
                v = int(rng.choice(n_core, p=core_weights))
            edges.add((u, v))

    out_adj: list[list[int]] = [[] for _ in range(n_nodes)]
    for u, v in sorted(edges):
        out_adj[u].append(v)

    def sid(i):
        return f"{words[i]}.n.01"

    verb_ids = [f"v{i:03d}.v.01" for i in range(n_verbs)]
    records = []
    cross_pos = 0
    unresolved = 0
    for u in range(n_nodes):
        toks: list[tuple[str, str | None]] = []
        for v in out_adj[u]:
            if rng.random() < 0.4:
                toks.append((str(rng.choice(FILLER)), None))
            toks.append((words[v], sid(v)))
        if u >= feed_start and rng.random() < 0.05:
            toks.append((f"v{int(rng.integers(n_verbs)):03d}", verb_ids[int(rng.integers(n_verbs))]))
            cross_pos += 1
        if u >= feed_start and rng.random() < 0.002:
            toks.append(("ghost", f"ghost{u}.n.01"))
            unresolved += 1
        records.append(GlossRecord(sid(u), (words[u],), "n", tuple(toks)))
    for i, vid in enumerate(verb_ids):
        tgt = int(rng.integers(n_core))
        records.append(GlossRecord(vid, (f"v{i:03d}",), "v", (("to", None), (words[tgt], sid(tgt)))))

    order = rng.permutation(len(records))
    records = [records[i] for i in order]

    dates, cluster_years = _dates(rng, clusters, words)
    core_words = [words[i] for c in clusters for i in c]
    other = [words[i] for i in range(n_core, n_nodes)]
    lists = []
    for name, n_list, frac in (("basic", 150, 0.5), ("common", 220, 0.3)):
        n_in = int(n_list * frac)
        chosen = list(rng.choice(core_words, n_in, replace=False)) + list(
            rng.choice(other, n_list - n_in, replace=False))
        lists.append(WordList(name, frozenset(chosen)))

    return Fixture(
        records=records,
        dates=dates,
        word_lists=lists,
        closure=sorted(sid(i) for c in clusters for i in c),
        clusters=[sorted(sid(i) for i in c) for c in clusters],
        noun_edges=len(edges),
        unresolved=unresolved,
        cross_pos=cross_pos,
        seed=seed,
        cluster_years=cluster_years,
    )


def _dates(rng, clusters, words):
    """Each cluster gets an era; members are dated within a few decades of it."""
    dates = []
    centres = []
    for members in clusters:
        r = rng.random()
        if r < 0.15:
            centre, spread = 1150, 0
        elif r < 0.75:
            centre, spread = int(rng.integers(1300, 1601)), 15
        else:
            centre, spread = int(rng.integers(1800, 1951)), 12
        centres.append(centre)
        for i in members:
            u = rng.random()
            if u < 0.08:
                continue  # undated
            year = centre if spread == 0 else int(np.clip(round(rng.normal(centre, spread)), 600, 2000))
            flags = frozenset()
            if u > 0.97:
                flags = frozenset({"proper_noun"})
            elif u > 0.95:
                flags = frozenset({"compound"})
            elif u > 0.92:
                flags = frozenset({"polysemous"})
            dates.append(DateRecord(words[i], year, flags))
    dates.sort(key=lambda d: d.word)
    return dates, centres
