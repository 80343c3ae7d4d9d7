import hashlib
import json
import os
from pathlib import Path

import pytest

from dictcore.cli import main

GOLDEN = Path(__file__).parent / "golden" / "fixture_digests.json"
# artifacts built only from integer arithmetic; float tables are checked by run-to-run identity
PINNED = [
    "graph.edges.tsv", "graph.nodes.jsonl", "ingest.json", "degree_histogram.csv",
    "core.json", "convergence.csv", "girth.csv", "loop_histogram.csv",
    "components.json", "components.txt", "components.dot", "walk_matrix.txt",
    "etym_summary.csv", "mean_dates.csv", "report/table1_overlap.csv",
    "report/table2_components.txt", "report/fig2_loop_histogram.csv",
]


@pytest.fixture(scope="module")
def fx_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("fx")
    assert main(["fixture", "--out", str(d)]) == 0
    return d


def run_pipeline(fx_dir, wd, *extra):
    argv = [
        "run", "-w", str(wd), "--gloss", str(fx_dir / "glosses.xwn"),
        "--dates", str(fx_dir / "dates.tsv"), "--trials", "200", "--randomized-seeds", "1,2",
        "--wordlists", str(fx_dir / "wordlist_basic.txt"), str(fx_dir / "wordlist_common.txt"),
        *extra,
    ]
    return main(argv)


def digests(wd):
    return {
        str(p.relative_to(wd)): hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(Path(wd).rglob("*")) if p.is_file()
    }


@pytest.fixture(scope="module")
def pipeline(fx_dir, tmp_path_factory):
    wd = tmp_path_factory.mktemp("wd")
    assert run_pipeline(fx_dir, wd) == 0
    return wd


def test_ingest_then_core(fx_dir, tmp_path):
    assert main(["ingest", "-w", str(tmp_path), "--gloss", str(fx_dir / "glosses.xwn")]) == 0
    assert main(["core", "-w", str(tmp_path), "--sample", "100", "--seed", "7"]) == 0
    core = json.loads((tmp_path / "core.json").read_text())
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["stages"]["core"]["seed"] == 7
    closure = json.loads((fx_dir / "fixture_manifest.json").read_text())["closure"]
    assert sorted(core["members"]) == closure
    rows = (tmp_path / "convergence.csv").read_text().splitlines()
    assert len(rows) > 100


def test_loops_with_randomized_sources(tmp_path, fx_dir):
    wd = tmp_path
    main(["ingest", "-w", str(wd), "--gloss", str(fx_dir / "glosses.xwn")])
    main(["core", "-w", str(wd)])
    assert main(["loops", "-w", str(wd), "--randomized-seeds", "1,2,3"]) == 0
    lines = (wd / "loop_histogram.csv").read_text().splitlines()
    sources = {ln.split(",")[2] for ln in lines[1:]}
    assert sources == {"real", "randomized:1", "randomized:2", "randomized:3"}


def test_missing_artifact_exit_code(tmp_path, capsys):
    assert main(["core", "-w", str(tmp_path)]) == 2
    assert "graph" in capsys.readouterr().err


def test_bad_parameter_exit_code(fx_dir, tmp_path):
    main(["ingest", "-w", str(tmp_path), "--gloss", str(fx_dir / "glosses.xwn")])
    assert main(["core", "-w", str(tmp_path), "--threshold", "1.5"]) == 3
    assert main(["core", "-w", str(tmp_path), "--sample", "0"]) == 3


def test_config_file_sets_defaults(fx_dir, tmp_path):
    main(["ingest", "-w", str(tmp_path), "--gloss", str(fx_dir / "glosses.xwn")])
    conf = tmp_path / "run.conf"
    conf.write_text("# core settings\nsample = 50\nseed=11\n")
    assert main(["core", "-w", str(tmp_path), "--config", str(conf)]) == 0
    stage = json.loads((tmp_path / "manifest.json").read_text())["stages"]["core"]
    assert (stage["sample"], stage["seed"]) == (50, 11)
    # command-line flags still win
    assert main(["core", "-w", str(tmp_path), "--config", str(conf), "--seed", "3"]) == 0
    assert json.loads((tmp_path / "manifest.json").read_text())["stages"]["core"]["seed"] == 3
    conf.write_text("no_such_flag=1\n")
    assert main(["core", "-w", str(tmp_path), "--config", str(conf)]) == 3


def test_json_format(fx_dir, tmp_path):
    main(["ingest", "-w", str(tmp_path), "--gloss", str(fx_dir / "glosses.xwn"), "--format", "json"])
    data = json.loads((tmp_path / "degree_histogram.json").read_text())
    assert data


def test_manifest_records_basenames_only(pipeline):
    manifest = json.loads((pipeline / "manifest.json").read_text())
    for entry in manifest["inputs"].values():
        assert "/" not in entry["file"]
        assert len(entry["sha256"]) == 64
    assert "timings" not in json.dumps(manifest)


def test_golden_digests(pipeline):
    got = {k: v for k, v in digests(pipeline).items() if k in PINNED}
    assert sorted(got) == sorted(PINNED)
    if os.environ.get("DICTCORE_REGEN_GOLDEN"):
        GOLDEN.write_text(json.dumps(got, indent=1, sort_keys=True) + "\n")
    assert got == json.loads(GOLDEN.read_text())


def test_two_runs_are_byte_identical(fx_dir, pipeline, tmp_path):
    timings = tmp_path / "timings.json"
    assert run_pipeline(fx_dir, tmp_path / "again", "--timings", str(timings)) == 0
    assert digests(pipeline) == digests(tmp_path / "again")
    assert set(json.loads(timings.read_text())) >= {"ingest", "core", "report"}
