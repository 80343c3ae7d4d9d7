"""Readers and writers for dictionary sources, word lists and date tables.

Gloss files ("XWN-lite") hold one synset per line::

    synset_id<TAB>lemma[,lemma...]<TAB>pos<TAB>token[ token...]

where a token is ``surface`` or ``surface%synset_id``.  Blank lines and lines
starting with ``#`` are ignored.
"""
from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .graph import BuildReport, DictGraph, SenseNode, build_graph, normalize_pos

log = logging.getLogger(__name__)

DATE_FLAGS = ("proper_noun", "compound", "polysemous")
OLD_ENGLISH_YEAR = 1150
MIN_YEAR = 600

_SENSE_SUFFIX = re.compile(r"\.(\d+)$")


class ParseError(ValueError):
    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


@dataclass(frozen=True)
class GlossRecord:
    synset_id: str
    lemmas: tuple[str, ...]
    pos: str
    gloss_tokens: tuple[tuple[str, str | None], ...] = ()

    @property
    def sense_rank(self) -> int:
        m = _SENSE_SUFFIX.search(self.synset_id)
        return int(m.group(1)) if m and int(m.group(1)) > 0 else 1

    @property
    def gloss(self) -> str:
        return " ".join(surface for surface, _ in self.gloss_tokens)

    def targets(self) -> list[str]:
        return [t for _, t in self.gloss_tokens if t is not None]


@dataclass(frozen=True)
class WordList:
    name: str
    words: frozenset[str]

    def __len__(self):
        return len(self.words)


@dataclass(frozen=True)
class DateRecord:
    word: str
    year: int
    flags: frozenset[str] = frozenset()


@dataclass
class LinkReport:
    """Counts of gloss links that did not become edges."""

    unresolved: int = 0
    filtered: int = 0
    build: BuildReport = field(default_factory=BuildReport)


def _lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield lineno, line


def _parse_token(tok: str) -> tuple[str, str | None]:
    surface, sep, target = tok.rpartition("%")
    if not sep:
        return tok, None
    if not surface or not target:
        raise ValueError(f"bad token {tok!r}")
    return surface, target


def parse_gloss_line(line: str) -> GlossRecord:
    parts = line.split("\t")
    if len(parts) == 3:
        parts.append("")
    if len(parts) != 4:
        raise ValueError(f"expected 4 tab-separated fields, got {len(parts)}")
    sid, lemmas, pos, tokens = (p.strip() for p in parts)
    if not sid:
        raise ValueError("empty synset id")
    lemma_list = tuple(x.strip() for x in lemmas.split(",") if x.strip())
    if not lemma_list:
        raise ValueError(f"synset {sid!r} has no lemmas")
    if not pos:
        raise ValueError(f"synset {sid!r} has no part of speech")
    toks = tuple(_parse_token(t) for t in tokens.split())
    return GlossRecord(sid, lemma_list, pos, toks)


def parse_gloss_file(path) -> list[GlossRecord]:
    """Parse an XWN-lite file.

    Raises ParseError on malformed lines or repeated synset ids.  Targets that
    name no record in the file are logged as warnings and kept.
    """
    records: list[GlossRecord] = []
    seen: dict[str, int] = {}
    for lineno, line in _lines(path):
        try:
            rec = parse_gloss_line(line)
        except ValueError as exc:
            raise ParseError(path, lineno, str(exc)) from None
        if rec.synset_id in seen:
            raise ParseError(
                path, lineno,
                f"duplicate synset id {rec.synset_id!r} (first on line {seen[rec.synset_id]})",
            )
        seen[rec.synset_id] = lineno
        records.append(rec)
    for sid, target in unresolved_links(records):
        log.warning("unresolved link %s -> %s", sid, target)
    return records


def unresolved_links(records: Sequence[GlossRecord]) -> list[tuple[str, str]]:
    known = {r.synset_id for r in records}
    return [(r.synset_id, t) for r in records for t in r.targets() if t not in known]


def format_gloss_record(rec: GlossRecord) -> str:
    toks = " ".join(s if t is None else f"{s}%{t}" for s, t in rec.gloss_tokens)
    return "\t".join((rec.synset_id, ",".join(rec.lemmas), rec.pos, toks))


def write_gloss_file(path, records: Iterable[GlossRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(format_gloss_record(rec) + "\n")


def _passes(rec: GlossRecord, pos_filter: str | None) -> bool:
    return pos_filter is None or normalize_pos(rec.pos) == normalize_pos(pos_filter)


def link_graph(records: Sequence[GlossRecord], pos_filter: str | None = None):
    """Synset-level graph: u -> v when v is a sense-tagged target in u's gloss.

    Returns ``(graph, LinkReport)``.
    """
    kept = [r for r in records if _passes(r, pos_filter)]
    by_id = {r.synset_id: r for r in records}
    index = {r.synset_id: i for i, r in enumerate(kept)}
    nodes = [
        SenseNode(i, r.synset_id, r.lemmas, normalize_pos(r.pos), r.sense_rank, r.gloss)
        for i, r in enumerate(kept)
    ]
    report = LinkReport()
    edges = []
    for i, r in enumerate(kept):
        for target in r.targets():
            if target not in by_id:
                report.unresolved += 1
            elif target not in index:
                report.filtered += 1
            else:
                edges.append((i, index[target]))
    g = build_graph(nodes, edges)
    report.build = g.report
    return g, report


def reduce_first_sense(records: Sequence[GlossRecord], pos_filter: str | None = "noun"):
    """Word-level graph using only each word's first sense.

    A node is a case-folded first lemma.  Its out-edges come from the gloss of
    its lowest-ranked sense: each tagged token links to the word heading the
    target synset.  Returns ``(graph, LinkReport)``.
    """
    by_id = {r.synset_id: r for r in records}
    first: dict[str, GlossRecord] = {}
    order = sorted(
        (r for r in records if _passes(r, pos_filter)),
        key=lambda r: r.sense_rank,
    )
    for r in order:
        first.setdefault(r.lemmas[0].lower(), r)
    words = sorted(first)
    index = {w: i for i, w in enumerate(words)}
    nodes = [
        SenseNode(i, w, (w,), normalize_pos(first[w].pos), 1, first[w].gloss)
        for i, w in enumerate(words)
    ]
    report = LinkReport()
    edges = []
    for i, w in enumerate(words):
        for target in first[w].targets():
            rec = by_id.get(target)
            if rec is None:
                report.unresolved += 1
                continue
            tw = rec.lemmas[0].lower()
            if tw not in index or not _passes(rec, pos_filter):
                report.filtered += 1
                continue
            edges.append((i, index[tw]))
    g = build_graph(nodes, edges)
    report.build = g.report
    return g, report


def read_edge_list(edges_path, nodes_path) -> DictGraph:
    """Load the ``src_id<TAB>dst_id`` + JSON-lines node metadata format."""
    nodes: list[SenseNode] = []
    index: dict[str, int] = {}
    with open(nodes_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                key = str(obj["id"])
            except (ValueError, KeyError) as exc:
                raise ParseError(nodes_path, lineno, f"bad node record: {exc}") from None
            if key in index:
                raise ParseError(nodes_path, lineno, f"duplicate node id {key!r}")
            i = len(nodes)
            index[key] = i
            nodes.append(SenseNode(
                i, key, tuple(obj.get("lemmas") or [key]),
                obj.get("pos", "noun"), int(obj.get("sense_rank", 1)), obj.get("gloss", ""),
            ))
    edges = []
    for lineno, line in _lines(edges_path):
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError(edges_path, lineno, "expected src_id<TAB>dst_id")
        try:
            edges.append((index[parts[0]], index[parts[1]]))
        except KeyError as exc:
            raise ParseError(edges_path, lineno, f"unknown node id {exc.args[0]!r}") from None
    return build_graph(nodes, edges)


def write_nodes(g: DictGraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for n in g.nodes:
            fh.write(json.dumps({
                "id": n.key, "lemmas": list(n.lemmas), "pos": n.pos,
                "sense_rank": n.sense_rank, "gloss": n.gloss,
            }, ensure_ascii=False) + "\n")


def write_edges(g: DictGraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for u, v in g.edges():
            fh.write(f"{g.key(u)}\t{g.key(v)}\n")


def write_edge_list(g: DictGraph, edges_path, nodes_path) -> None:
    write_edges(g, edges_path)
    write_nodes(g, nodes_path)


def parse_word_list(path, name: str | None = None) -> WordList:
    words = frozenset(line.strip().lower() for _, line in _lines(path))
    if not words:
        raise ParseError(path, 0, "word list is empty")
    return WordList(name or Path(path).stem, words)


def parse_dates(path) -> list[DateRecord]:
    """Parse ``word<TAB>year-or-OE[<TAB>flag,...]``; ``OE`` means year 1150."""
    out: list[DateRecord] = []
    seen: set[str] = set()
    for lineno, line in _lines(path):
        parts = line.split("\t")
        if len(parts) not in (2, 3):
            raise ParseError(path, lineno, "expected word<TAB>year[<TAB>flags]")
        word, year_s = parts[0].strip(), parts[1].strip()
        if year_s.upper() == "OE":
            year = OLD_ENGLISH_YEAR
        else:
            try:
                year = int(year_s)
            except ValueError:
                raise ParseError(path, lineno, f"year {year_s!r} is neither an integer nor OE") from None
        if year < MIN_YEAR:
            raise ParseError(path, lineno, f"year {year} precedes {MIN_YEAR}")
        flags = frozenset(f.strip() for f in parts[2].split(",") if f.strip()) if len(parts) == 3 else frozenset()
        unknown = flags - set(DATE_FLAGS)
        if unknown:
            raise ParseError(path, lineno, f"unknown flag(s) {sorted(unknown)}")
        key = word.lower()
        if key in seen:
            raise ParseError(path, lineno, f"duplicate date entry for {word!r}")
        seen.add(key)
        out.append(DateRecord(word, year, flags))
    return out


def format_date_record(rec: DateRecord) -> str:
    year = "OE" if rec.year == OLD_ENGLISH_YEAR else str(rec.year)
    cols = [rec.word, year]
    if rec.flags:
        cols.append(",".join(f for f in DATE_FLAGS if f in rec.flags))
    return "\t".join(cols)


def write_dates(path, records: Iterable[DateRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(format_date_record(rec) + "\n")
