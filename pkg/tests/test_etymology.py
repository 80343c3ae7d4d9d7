import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dictcore.decompose import Component, ComponentSet
from dictcore.etymology import (
    ComponentDates, attach_dates, mean_dates, median_pairwise_distance,
    random_baseline, sign_test_below, summarize,
)
from dictcore.ingest import DateRecord


def cset(*groups):
    return ComponentSet([Component(i, list(g), []) for i, g in enumerate(groups)])


WORDS = ["shoe", "sneaker", "rome", "doghouse", "set", "blorp"]


def test_attach_dates_and_exclusions():
    dates = [
        DateRecord("shoe", 1150), DateRecord("Sneaker", 1895),
        DateRecord("rome", 1200, frozenset({"proper_noun"})),
        DateRecord("doghouse", 1600, frozenset({"compound"})),
        DateRecord("set", 1300, frozenset({"polysemous", "compound"})),
    ]
    (cd,) = attach_dates(cset(range(6)), dates, lambda v: WORDS[v])
    assert sorted(cd.years) == [1150, 1895]
    assert cd.excluded == {"proper_noun": 1, "compound": 2, "polysemous": 0, "no_date": 1}
    assert cd.n + sum(cd.excluded.values()) == 6


def test_median_pairwise_known_values():
    assert median_pairwise_distance([1300] * 3) == 0
    assert median_pairwise_distance([1150, 1895]) == 745
    assert median_pairwise_distance([1200, 1300, 1500]) == 200
    assert median_pairwise_distance([1400]) is None


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(600, 2000), min_size=2, max_size=30), st.integers(-500, 500))
def test_median_translation_invariant(years, shift):
    assert median_pairwise_distance(years) == median_pairwise_distance([y + shift for y in years])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(600, 2000), min_size=2, max_size=30), st.randoms(use_true_random=False))
def test_median_order_invariant(years, rnd):
    shuffled = list(years)
    rnd.shuffle(shuffled)
    assert median_pairwise_distance(years) == median_pairwise_distance(shuffled)


def test_baseline_identical_pool_is_zero():
    res = random_baseline([1400] * 20, [3, 5, 4], trials=10, seed=1)
    assert res.medians.shape == (10, 3)
    assert (res.medians == 0).all()


def test_baseline_deterministic():
    rng = np.random.default_rng(0)
    pool = rng.integers(1100, 1950, 80).tolist()
    a = random_baseline(pool, [5, 7, 9], trials=25, seed=3)
    b = random_baseline(pool, [5, 7, 9], trials=25, seed=3)
    c = random_baseline(pool, [5, 7, 9], trials=25, seed=4)
    assert np.array_equal(a.medians, b.medians)
    assert not np.array_equal(a.medians, c.medians)
    # trial t only depends on seed + t
    d = random_baseline(pool, [5, 7, 9], trials=24, seed=4)
    assert np.array_equal(a.medians[1:], d.medians)


def test_baseline_rejects_bad_profiles():
    with pytest.raises(ValueError):
        random_baseline([1400] * 5, [3, 3])
    with pytest.raises(ValueError):
        random_baseline([1400] * 5, [1])


def test_sign_test_counts_and_ties():
    p, below, above = sign_test_below([1, 2, 3, 5], [2, 3, 3, 4])
    assert (below, above) == (2, 1)
    assert p == pytest.approx(0.5)
    assert sign_test_below([1, 1], [1, 1]) == (1.0, 0, 0)


def test_fixture_components_are_tighter_than_baseline(fixture_data, fixture_graph):
    from dictcore.core import sampled_core
    from dictcore.decompose import decompose_core

    core = sampled_core(fixture_graph, sample_size=100, seed=0)
    cs = decompose_core(fixture_graph, core.members)
    cds = attach_dates(cs, fixture_data.dates, fixture_graph.word)
    summary = summarize(cds, trials=100, seed=0)
    assert summary.sign_test_p < 0.01
    assert summary.below > summary.above


def test_mean_dates_bins():
    cds = [ComponentDates(0, [1400, 1500]), ComponentDates(1, [1150] * 4), ComponentDates(2, [])]
    assert mean_dates(cds) == {1150: 1, 1450: 1}
    assert mean_dates(cds, bin_width=100) == {1100: 1, 1400: 1}


def test_mean_dates_two_eras():
    cds = [ComponentDates(i, [1350 + i, 1360]) for i in range(5)]
    cds += [ComponentDates(10 + i, [1880, 1890 + i]) for i in range(3)]
    hist = mean_dates(cds)
    assert hist == {1350: 5, 1850: 3}
