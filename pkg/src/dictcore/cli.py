"""Command line pipeline.

Every stage reads its inputs from, and writes its outputs to, one working
directory.  ``manifest.json`` in that directory records the tool version,
input digests and the parameters of each stage that has run.

Exit codes: 0 success, 2 missing upstream artifact, 3 parameter out of range.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import __version__
from .core import CoreError, CoreSet, convergence_profile, core_word_list, exact_core, sampled_core, wordlist_overlap
from .decompose import (
    DecompositionError, component_report, components_from_json, components_to_dot,
    components_to_json, decompose_core, format_component_report,
)
from .etymology import attach_dates, mean_dates, summarize
from .fixture import make_fixture
from .graph import DictGraph, degree_histograms
from .ingest import (
    link_graph, parse_dates, parse_gloss_file, parse_word_list, read_edge_list,
    reduce_first_sense, write_edges, write_nodes,
)
from .loops import INF, edge_girth, loop_histogram, nodes_in_loops, randomize_degree_preserving
from .pathmatrix import (
    format_themes, prune_ubiquitous, read_walk_matrix, svd_topk, theme_report,
    walk_counts, write_walk_matrix,
)

log = logging.getLogger("dictcore")

GRAPH_EDGES = "graph.edges.tsv"
GRAPH_NODES = "graph.nodes.jsonl"
CORE_JSON = "core.json"
COMPONENTS_JSON = "components.json"
WALK_MATRIX = "walk_matrix.txt"
MANIFEST = "manifest.json"


class MissingArtifact(Exception):
    exit_code = 2


class BadParameter(Exception):
    exit_code = 3


# ---- file helpers ---------------------------------------------------------

def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_via(path: Path, writer) -> None:
    """Run ``writer(tmp_path)`` and move the result into place."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    os.close(fd)
    try:
        writer(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_table(directory: Path, stem: str, header: list[str], rows, fmt: str = "csv") -> Path:
    rows = [list(r) for r in rows]
    if fmt == "json":
        path = directory / f"{stem}.json"
        atomic_write(path, json.dumps([dict(zip(header, r)) for r in rows], indent=1) + "\n")
    else:
        path = directory / f"{stem}.csv"
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        atomic_write(path, buf.getvalue())
    return path


def sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def require(path: Path) -> Path:
    if not path.exists():
        raise MissingArtifact(f"missing upstream artifact: {path}")
    return path


def check(cond: bool, message: str) -> None:
    if not cond:
        raise BadParameter(message)


def fmt_num(x) -> str:
    if x is None:
        return ""
    if x == INF:
        return "inf"
    if isinstance(x, float) and x.is_integer():
        return str(int(x))
    return repr(x) if isinstance(x, float) else str(x)


# ---- manifest -------------------------------------------------------------

def load_manifest(workdir: Path) -> dict:
    p = workdir / MANIFEST
    if p.exists():
        return json.loads(p.read_text(encoding="utf-8"))
    return {"tool": "dictcore", "version": __version__, "inputs": {}, "stages": {}}


def record_stage(workdir: Path, stage: str, params: dict, inputs: dict[str, Path] | None = None) -> None:
    m = load_manifest(workdir)
    m["version"] = __version__
    for name, path in (inputs or {}).items():
        m["inputs"][name] = {"file": Path(path).name, "sha256": sha256(path)}
    m["stages"][stage] = params
    m["inputs"] = dict(sorted(m["inputs"].items()))
    m["stages"] = dict(sorted(m["stages"].items()))
    atomic_write(workdir / MANIFEST, json.dumps(m, indent=1, sort_keys=True) + "\n")


def load_graph(workdir: Path) -> DictGraph:
    return read_edge_list(require(workdir / GRAPH_EDGES), require(workdir / GRAPH_NODES))


def load_core_members(workdir: Path, g: DictGraph) -> list[int]:
    doc = json.loads(require(workdir / CORE_JSON).read_text(encoding="utf-8"))
    return sorted(g.index_of(k) for k in doc["members"])


def load_components(workdir: Path, g: DictGraph):
    return components_from_json(require(workdir / COMPONENTS_JSON).read_text(encoding="utf-8"), g)


# ---- stages ---------------------------------------------------------------

def cmd_ingest(args) -> None:
    wd = Path(args.workdir)
    pos = None if args.pos == "all" else args.pos
    inputs = {}
    if args.gloss:
        records = parse_gloss_file(args.gloss)
        inputs["gloss"] = args.gloss
        if args.first_sense:
            g, rep = reduce_first_sense(records, pos)
        else:
            g, rep = link_graph(records, pos)
        report = {"records": len(records), "unresolved_links": rep.unresolved,
                  "filtered_links": rep.filtered}
    elif args.edges and args.nodes:
        g = read_edge_list(args.edges, args.nodes)
        inputs.update(edges=args.edges, nodes=args.nodes)
        report = {}
    else:
        raise BadParameter("ingest needs --gloss, or --edges with --nodes")
    report.update(nodes=g.node_count, edges=g.edge_count,
                  duplicates_dropped=g.report.duplicates, self_loops_dropped=g.report.self_loops)
    _atomic_via(wd / GRAPH_EDGES, lambda p: write_edges(g, p))
    _atomic_via(wd / GRAPH_NODES, lambda p: write_nodes(g, p))
    atomic_write(wd / "ingest.json", json.dumps(report, indent=1, sort_keys=True) + "\n")
    ins, outs = degree_histograms(g)
    degrees = sorted(set(ins) | set(outs))
    write_table(wd, "degree_histogram", ["degree", "in_count", "out_count"],
                ([d, ins.get(d, 0), outs.get(d, 0)] for d in degrees), args.format)
    record_stage(wd, "ingest", {"pos": args.pos, "first_sense": args.first_sense}, inputs)
    log.info("graph: %d nodes, %d edges", g.node_count, g.edge_count)


def cmd_core(args) -> None:
    wd = Path(args.workdir)
    check(args.sample >= 1, "--sample must be >= 1")
    check(0 < args.threshold <= 1, "--threshold must be in (0, 1]")
    check(0 <= args.degeneracy < 1, "--degeneracy must be in [0, 1)")
    check(args.max_depth >= 1, "--max-depth must be >= 1")
    check(0 < args.coverage <= 1, "--coverage must be in (0, 1]")
    g = load_graph(wd)
    check(args.sample <= g.node_count, f"--sample exceeds node count {g.node_count}")
    try:
        if args.method == "exact":
            core = exact_core(g, args.coverage)
            rng = np.random.default_rng(args.seed)
            sample = sorted(int(x) for x in rng.choice(g.node_count, size=args.sample, replace=False))
            core.profiles = [convergence_profile(g, s, args.max_depth) for s in sample]
            core.sample = sample
        else:
            core = sampled_core(g, args.sample, args.seed, args.threshold, args.degeneracy, args.max_depth)
    except CoreError as exc:
        raise BadParameter(str(exc)) from None
    doc = {
        "method": core.method,
        "size": len(core),
        "members": [g.key(v) for v in core.sorted_members()],
        "degenerate_samples": [g.key(v) for v in core.degenerate_samples],
        "samples": [
            {"start": g.key(p.start), "reached": p.total,
             "half_height": p.half_height_distance, "saturated": p.saturated}
            for p in core.profiles
        ],
        "in_loops_fraction": _loop_fraction(g, core.members),
    }
    atomic_write(wd / CORE_JSON, json.dumps(doc, indent=1) + "\n")
    write_table(wd, "convergence", ["start_id", "distance", "cumulative"],
                ([g.key(p.start), d, c] for p in core.profiles for d, c in enumerate(p.cumulative, 1)),
                args.format)
    record_stage(wd, "core", {
        "method": args.method, "sample": args.sample, "seed": args.seed,
        "threshold": args.threshold, "degeneracy": args.degeneracy,
        "max_depth": args.max_depth, "coverage": args.coverage,
    })
    log.info("core: %d members", len(core))


def _loop_fraction(g, members) -> float:
    if not members:
        return 0.0
    looped = nodes_in_loops(g)
    return round(len(looped & set(members)) / len(members), 6)


def _histogram_rows(hist, source):
    rows = [[k, c, source] for k, c in hist.counts.items()]
    if hist.infinite:
        rows.append(["inf", hist.infinite, source])
    return rows


def cmd_loops(args) -> None:
    wd = Path(args.workdir)
    check(args.max_probe_depth is None or args.max_probe_depth >= 2, "--max-probe-depth must be >= 2")
    check(args.swap_factor > 0, "--swap-factor must be positive")
    g = load_graph(wd)
    scope = load_core_members(wd, g) if args.scope == "core" else None
    girths = edge_girth(g, scope, args.max_probe_depth, workers=args.threads)
    write_table(wd, "girth", ["src_id", "dst_id", "girth"],
                ([g.key(u), g.key(v), fmt_num(x)] for (u, v), x in girths.items()), args.format)
    rows = _histogram_rows(loop_histogram(girths), "real")
    for seed in args.randomized_seeds:
        if args.randomize_scope == "full":
            rand = randomize_degree_preserving(g, args.swap_factor, seed).graph
            rscope = scope
            if scope is not None:
                core_doc = load_manifest(wd)["stages"].get("core", {})
                try:
                    rscope = sampled_core(rand, core_doc.get("sample", 100), seed).members or None
                except CoreError:
                    rscope = None
                if rscope is None:
                    log.warning("randomized graph %d has no core; using all nodes", seed)
        else:
            rand = randomize_degree_preserving(g, args.swap_factor, seed, subgraph_nodes=scope).graph
            rscope = scope
        hist = loop_histogram(edge_girth(rand, rscope, args.max_probe_depth, workers=args.threads))
        rows.extend(_histogram_rows(hist, f"randomized:{seed}"))
    write_table(wd, "loop_histogram", ["loop_length", "edge_count", "source"], rows, args.format)
    looped = nodes_in_loops(g)
    summary = {"nodes_in_loops": len(looped), "scope": args.scope, "edges_in_scope": len(girths)}
    if scope is not None:
        summary["core_fraction_in_loops"] = round(len(looped & set(scope)) / max(len(scope), 1), 6)
    atomic_write(wd / "loops.json", json.dumps(summary, indent=1, sort_keys=True) + "\n")
    record_stage(wd, "loops", {
        "scope": args.scope, "randomized_seeds": args.randomized_seeds,
        "swap_factor": args.swap_factor, "randomize_scope": args.randomize_scope,
        "max_probe_depth": args.max_probe_depth,
    })


def cmd_randomize(args) -> None:
    wd = Path(args.workdir)
    check(args.swap_factor > 0, "--swap-factor must be positive")
    g = load_graph(wd)
    scope = load_core_members(wd, g) if args.scope == "core" else None
    res = randomize_degree_preserving(g, args.swap_factor, args.seed, subgraph_nodes=scope)
    _atomic_via(wd / f"randomized.{args.seed}.edges.tsv", lambda p: write_edges(res.graph, p))
    record_stage(wd, f"randomize:{args.seed}", {
        "seed": args.seed, "swap_factor": args.swap_factor, "scope": args.scope,
        "swaps": res.swaps, "target": res.target,
    })
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)


def cmd_decompose(args) -> None:
    wd = Path(args.workdir)
    check(args.L >= 2, "--L must be >= 2")
    check(args.refine_L >= 2, "--refine-L must be >= 2")
    check(args.refine_threshold >= 2, "--refine-threshold must be >= 2")
    g = load_graph(wd)
    core = load_core_members(wd, g)
    try:
        cs = decompose_core(g, core, args.L, args.refine_threshold, args.refine_L, args.refine_fixpoint)
    except DecompositionError as exc:
        raise BadParameter(str(exc)) from None
    atomic_write(wd / COMPONENTS_JSON, components_to_json(cs, g))
    atomic_write(wd / "components.dot", components_to_dot(cs, g))
    atomic_write(wd / "components.txt", format_component_report(component_report(cs, g)))
    record_stage(wd, "decompose", {
        "L": args.L, "refine_threshold": args.refine_threshold, "refine_L": args.refine_L,
        "refine_fixpoint": args.refine_fixpoint, "components": len(cs),
    })
    log.info("decomposition: %d components", len(cs))


def cmd_paths(args) -> None:
    wd = Path(args.workdir)
    check(args.max_len >= 1, "--max-len must be >= 1")
    check(0 < args.prune <= 1, "--prune must be in (0, 1]")
    g = load_graph(wd)
    cs = load_components(wd, g)
    W = prune_ubiquitous(walk_counts(g, cs, args.max_len), args.prune)
    _atomic_via(wd / WALK_MATRIX, lambda p: write_walk_matrix(p, W))
    record_stage(wd, "paths", {"max_len": args.max_len, "prune": args.prune,
                               "pruned": W.pruned_components, "saturated": W.saturated})


def cmd_svd(args) -> None:
    wd = Path(args.workdir)
    W = read_walk_matrix(require(wd / WALK_MATRIX))
    check(args.k >= 1, "--k must be >= 1")
    k = min(args.k, *W.shape) if min(W.shape) else 0
    check(k >= 1, "walk matrix is empty")
    res = svd_topk(W, k, scale_columns=args.scale_columns, with_left=False)
    labels = {}
    comp_path = wd / COMPONENTS_JSON
    if comp_path.exists():
        g = load_graph(wd)
        for c in load_components(wd, g):
            labels[c.id] = "/".join(g.word(v) for v in c.members[:3])
    write_table(wd, "singular_values", ["index", "value"],
                ([i, f"{s:.12g}"] for i, s in enumerate(res.singular_values)), args.format)
    write_table(wd, "right_vectors", ["vector_index", "component_id", "coefficient"],
                ([i, cid, f"{res.right_vectors[i][j]:.12g}"]
                 for i in range(res.k) for j, cid in enumerate(res.component_ids)), args.format)
    themes = theme_report(res, labels, args.coeff_threshold, args.top_n)
    text = format_themes(themes, res)
    if res.notice:
        text = f"# {res.notice}\n" + text
    atomic_write(wd / "themes.txt", text)
    record_stage(wd, "svd", {"k": args.k, "coeff_threshold": args.coeff_threshold,
                             "top_n": args.top_n, "scale_columns": args.scale_columns,
                             "returned": res.k})


def cmd_etym(args) -> None:
    wd = Path(args.workdir)
    check(args.trials >= 1, "--trials must be >= 1")
    check(args.bin_width >= 1, "--bin-width must be >= 1")
    dates_path = require(Path(args.dates))
    g = load_graph(wd)
    cs = load_components(wd, g)
    comp_dates = attach_dates(cs, parse_dates(dates_path), g.word)
    summ = summarize(comp_dates, args.trials, args.seed)
    write_table(wd, "etym_summary", ["component_id", "n", "median_pairwise_distance", "mean_year"],
                ([r["component_id"], r["n"], fmt_num(r["median_pairwise_distance"]),
                  f"{r['mean_year']:.4f}"] for r in summ.per_component), args.format)
    base = summ.baseline
    write_table(wd, "etym_baseline", ["trial", "pseudo_component", "median_pairwise_distance"],
                ([t, p, fmt_num(float(base.medians[t, p]))]
                 for t in range(base.trials) for p in range(len(base.size_profile))), args.format)
    hist = mean_dates(comp_dates, args.bin_width)
    write_table(wd, "mean_dates", ["bin_start", "bin_end", "components"],
                ([b, b + args.bin_width, c] for b, c in hist.items()), args.format)
    excluded = {}
    for cd in comp_dates:
        for k, v in cd.excluded.items():
            excluded[k] = excluded.get(k, 0) + v
    doc = {
        "components_dated": len(summ.per_component),
        "words_dated": sum(r["n"] for r in summ.per_component),
        "excluded": excluded,
        "sign_test_p": summ.sign_test_p,
        "below_baseline": summ.below,
        "above_baseline": summ.above,
        "baseline_quantiles": {str(q): v for q, v in base.quantiles().items()},
    }
    atomic_write(wd / "etym.json", json.dumps(doc, indent=1, sort_keys=True) + "\n")
    record_stage(wd, "etym", {"trials": args.trials, "seed": args.seed, "bin_width": args.bin_width},
                 {"dates": dates_path})


def cmd_report(args) -> None:
    """Collect figure/table-style outputs into ``<workdir>/report``."""
    wd = Path(args.workdir)
    out = wd / "report"
    g = load_graph(wd)
    core_doc = json.loads(require(wd / CORE_JSON).read_text(encoding="utf-8"))
    conv = require(wd / "convergence.csv")
    atomic_write(out / "fig1_convergence.csv", conv.read_text(encoding="utf-8"))
    write_table(out, "fig1_half_height", ["start_id", "half_height", "reached", "saturated"],
                ([s["start"], s["half_height"], s["reached"], int(s["saturated"])]
                 for s in core_doc["samples"]))
    atomic_write(out / "fig2_loop_histogram.csv",
                 require(wd / "loop_histogram.csv").read_text(encoding="utf-8"))
    atomic_write(out / "table2_components.txt",
                 require(wd / "components.txt").read_text(encoding="utf-8"))
    for name in ("themes.txt",):
        if (wd / name).exists():
            atomic_write(out / "table3_themes.txt", (wd / name).read_text(encoding="utf-8"))
    for src, dst in (("etym_summary.csv", "fig4a_pairwise.csv"),
                     ("etym_baseline.csv", "fig4a_baseline.csv"),
                     ("mean_dates.csv", "fig4b_mean_dates.csv")):
        if (wd / src).exists():
            atomic_write(out / dst, (wd / src).read_text(encoding="utf-8"))
    if args.wordlists:
        core_idx = [g.index_of(k) for k in core_doc["members"]]
        core_words = core_word_list(g, CoreSet(frozenset(core_idx)))
        lists = [parse_word_list(require(Path(p)), Path(p).stem.removeprefix("wordlist_"))
                 for p in args.wordlists]
        table = wordlist_overlap(core_words, lists)
        write_table(out, "table1_overlap", ["", *table.names], table.rows())
        record_stage(wd, "report", {"wordlists": [Path(p).name for p in args.wordlists]},
                     {f"wordlist:{Path(p).name}": p for p in args.wordlists})
    else:
        record_stage(wd, "report", {"wordlists": []})


def cmd_fixture(args) -> None:
    fx = make_fixture(n_nodes=args.nodes, n_clusters=args.clusters, core_size=args.core_size, seed=args.seed)
    paths = fx.write(args.out)
    for name, p in sorted(paths.items()):
        print(f"{name}\t{p}")


def cmd_run(args) -> None:
    """All stages in order with one set of parameters."""
    stages = [
        ("ingest", cmd_ingest), ("core", cmd_core), ("loops", cmd_loops),
        ("decompose", cmd_decompose), ("paths", cmd_paths), ("svd", cmd_svd),
    ]
    if args.dates:
        stages.append(("etym", cmd_etym))
    stages.append(("report", cmd_report))
    timings = {}
    for name, fn in stages:
        t0 = time.perf_counter()
        fn(args)
        timings[name] = round(time.perf_counter() - t0, 3)
    if args.timings:
        atomic_write(Path(args.timings), json.dumps(timings, indent=1) + "\n")


# ---- argument parsing -----------------------------------------------------

def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_common(p):
    p.add_argument("--workdir", "-w", default=".", help="stage artifact directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=1, help="worker processes for girth search")
    p.add_argument("--config", help="key=value file mirroring command-line flags")


def _add_ingest(p):
    p.add_argument("--gloss", help="XWN-lite gloss file")
    p.add_argument("--edges", help="edge list (src_id<TAB>dst_id)")
    p.add_argument("--nodes", help="JSON-lines node metadata for --edges")
    p.add_argument("--pos", default="noun", help="part-of-speech filter, or 'all'")
    p.add_argument("--first-sense", action="store_true", help="word-level first-sense reduction")


def _add_core(p):
    p.add_argument("--sample", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=1.0)
    p.add_argument("--degeneracy", type=float, default=0.01)
    p.add_argument("--max-depth", type=int, default=60)
    p.add_argument("--method", choices=("sampled", "exact"), default="sampled")
    p.add_argument("--coverage", type=float, default=0.99)


def _add_loops(p):
    p.add_argument("--scope", choices=("core", "all"), default="core")
    p.add_argument("--randomized-seeds", type=_int_list, default=[])
    p.add_argument("--swap-factor", type=float, default=10)
    p.add_argument("--randomize-scope", choices=("core", "full"), default="core")
    p.add_argument("--max-probe-depth", type=int, default=None)


def _add_decompose(p):
    p.add_argument("--L", type=int, default=5)
    p.add_argument("--refine-threshold", type=int, default=20)
    p.add_argument("--refine-L", type=int, default=4)
    p.add_argument("--refine-fixpoint", action="store_true")


def _add_paths(p):
    p.add_argument("--max-len", type=int, default=5)
    p.add_argument("--prune", type=float, default=0.8)


def _add_svd(p):
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--coeff-threshold", type=float, default=0.1)
    p.add_argument("--top-n", type=int, default=10)
    p.add_argument("--scale-columns", action="store_true")


def _add_etym(p, required=True):
    p.add_argument("--dates", required=required)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bin-width", type=int, default=50)


def _add_report(p):
    p.add_argument("--wordlists", nargs="*", default=[])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dictcore", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"dictcore {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, *adders, help=None):
        p = sub.add_parser(name, help=help)
        _add_common(p)
        for a in adders:
            a(p)
        p.set_defaults(func=func)
        return p

    add("ingest", cmd_ingest, _add_ingest, help="parse a dictionary into graph files")
    add("core", cmd_core, _add_core, help="extract the core and convergence curves")
    add("loops", cmd_loops, _add_loops, help="edge girths and loop histograms")
    p = add("randomize", cmd_randomize, help="degree-preserving randomized graph")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--swap-factor", type=float, default=10)
    p.add_argument("--scope", choices=("core", "all"), default="core")
    add("decompose", cmd_decompose, _add_decompose, help="split the core into components")
    add("paths", cmd_paths, _add_paths, help="walk-count matrix")
    add("svd", cmd_svd, _add_svd, help="singular vectors of the walk matrix")
    add("etym", cmd_etym, _add_etym, help="etymology statistics per component")
    add("report", cmd_report, _add_report, help="bundle figure/table outputs")

    p = sub.add_parser("run", help="run every stage")
    _add_common(p)
    _add_ingest(p)
    _add_core(p)
    _add_loops(p)
    _add_decompose(p)
    _add_paths(p)
    _add_svd(p)
    p.add_argument("--dates")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--bin-width", type=int, default=50)
    _add_report(p)
    p.add_argument("--timings", help="write stage timings here (kept out of the workdir)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("fixture", help="write the synthetic fixture")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--nodes", type=int, default=2000)
    p.add_argument("--clusters", type=int, default=60)
    p.add_argument("--core-size", type=int, default=600)
    p.set_defaults(func=cmd_fixture)
    return parser


def read_config(path) -> dict[str, str]:
    conf = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise BadParameter(f"{path}:{lineno}: expected key=value")
        conf[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return conf


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    conf = read_config(require(Path(args.config)))
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, value in conf.items():
        action = actions.get(key)
        if action is None:
            raise BadParameter(f"unknown config key {key!r} for {args.command}")
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        elif action.nargs in ("*", "+"):
            defaults[key] = value.split()
        else:
            defaults[key] = action.type(value) if action.type else value
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = _apply_config(parser, argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        args.func(args)
    except (MissingArtifact, BadParameter) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
