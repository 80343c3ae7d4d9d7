import logging
import random

import pytest

from dictcore.core import (
    CoreError, convergence_profile, exact_core, overlap_percent, sampled_core, wordlist_overlap,
)
from dictcore.graph import graph_from_edges
from dictcore.ingest import WordList
from oracles import closure_by_powers, random_digraph


def planted_attractor(seed=0):
    """20-node strongly connected sink fed by 30 feeder nodes."""
    rng = random.Random(seed)
    edges = [(i, (i + 1) % 20) for i in range(20)]
    edges += [(rng.randrange(20), rng.randrange(20)) for _ in range(15)]
    for u in range(20, 50):
        edges.append((u, rng.randrange(20)))
        if u > 21 and rng.random() < 0.5:
            edges.append((u, rng.randrange(20, u)))
    return graph_from_edges(50, edges)


def test_profile_chain():
    g = graph_from_edges(10, [(i, i + 1) for i in range(9)])
    p = convergence_profile(g, 0, max_depth=15)
    assert p.cumulative == [1, 2, 3, 4, 5, 6, 7, 8, 9] + [9] * 6
    assert p.half_height_distance == 5
    assert p.saturated


def test_profile_isolated_two_cycle():
    g = graph_from_edges(5, [(0, 1), (1, 0), (2, 3), (3, 4)])
    p = convergence_profile(g, 0)
    assert p.half_height_distance == 1
    assert p.saturated
    assert p.total == 2


def test_profile_truncated_by_depth():
    g = graph_from_edges(10, [(i, i + 1) for i in range(9)])
    p = convergence_profile(g, 0, max_depth=3)
    assert p.cumulative == [1, 2, 3]
    assert not p.saturated


def test_profile_is_non_decreasing(fixture_graph):
    for s in range(0, fixture_graph.node_count, 97):
        c = convergence_profile(fixture_graph, s).cumulative
        assert all(a <= b for a, b in zip(c, c[1:]))


def test_sampled_core_planted_attractor():
    g = planted_attractor()
    core = sampled_core(g, sample_size=20, seed=1)
    assert core.members == frozenset(range(20))
    assert all(core.membership_fraction[v] == 1.0 for v in core.members)


@pytest.mark.parametrize("seed", range(20))
def test_sampled_core_seed_invariant(seed):
    g = planted_attractor()
    assert sampled_core(g, sample_size=25, seed=seed).members == frozenset(range(20))


def test_disjoint_sinks_give_empty_core(caplog):
    edges = [(0, 1), (1, 0), (2, 3), (3, 2)]
    edges += [(u, 0) for u in range(4, 10)] + [(u, 2) for u in range(10, 16)]
    g = graph_from_edges(16, edges)
    with caplog.at_level(logging.WARNING, logger="dictcore.core"):
        core = sampled_core(g, sample_size=16, seed=0)
    assert core.members == frozenset()
    assert "empty" in caplog.text
    # a looser threshold recovers both sinks
    loose = sampled_core(g, sample_size=16, seed=0, membership_threshold=0.5)
    assert loose.members == frozenset({0, 1, 2, 3})


def test_all_degenerate_raises():
    g = graph_from_edges(200, [(0, 1), (1, 0)])
    with pytest.raises(CoreError):
        sampled_core(g, sample_size=200, seed=0, degeneracy_fraction=0.05)


def test_degenerate_samples_are_recorded():
    g = planted_attractor()
    g = graph_from_edges(60, list(g.edges()) + [(50, 51), (51, 50)])
    core = sampled_core(g, sample_size=60, seed=0, degeneracy_fraction=0.1)
    assert set(core.degenerate_samples) >= {50, 51}
    assert core.members == frozenset(range(20))


def test_threshold_monotone(fixture_graph):
    prev = None
    for t in (0.5, 0.8, 0.95, 1.0):
        m = sampled_core(fixture_graph, 60, seed=3, membership_threshold=t).members
        if prev is not None:
            assert m <= prev
        prev = m


def test_exact_core_matches_sampled_on_planted():
    g = planted_attractor()
    assert exact_core(g).members == sampled_core(g, 20, seed=4).members


def test_exact_core_matches_brute_force_reachability():
    rng = random.Random(9)
    for _ in range(200):
        n = rng.randint(1, 12)
        g = random_digraph(rng, n, rng.uniform(0.05, 0.5))
        R = closure_by_powers(g)
        for cov in (0.5, 0.99, 1.0):
            expected = {v for v in range(n) if R[:, v].sum() >= cov * n - 1e-9}
            assert exact_core(g, cov).members == expected


def test_exact_core_dag_is_empty():
    g = graph_from_edges(8, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)])
    assert exact_core(g, 0.99).members == frozenset()


def test_exact_core_coverage_nesting(fixture_graph):
    assert exact_core(fixture_graph, 1.0).members <= exact_core(fixture_graph, 0.99).members


def test_exact_core_memory_guard(fixture_graph):
    with pytest.raises(CoreError, match="sampled_core"):
        exact_core(fixture_graph, memory_cap=1024)


@pytest.mark.parametrize("count,size,pct", [(314, 600, 52), (319, 673, 47), (5, 5, 100), (1, 8, 13)])
def test_overlap_percent(count, size, pct):
    assert overlap_percent(count, size) == pct


def test_wordlist_overlap_table():
    core = WordList("Core", frozenset("abcdef"))
    other = WordList("Other", frozenset("defxyz"))
    same = WordList("Same", frozenset("abcdef"))
    t = wordlist_overlap(core, [other, same])
    assert t.sizes == [6, 6, 6]
    assert t.counts[(0, 1)] == 3 and t.percent(0, 1) == 50
    assert t.percent(0, 2) == 100
    assert t.rows()[0] == ["Core", "6", "3 (50%)", "6 (100%)"]
    with pytest.raises(ValueError):
        wordlist_overlap(core, [])
    with pytest.raises(ValueError):
        wordlist_overlap(core, [WordList("Empty", frozenset())])
