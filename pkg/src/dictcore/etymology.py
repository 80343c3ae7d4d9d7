"""Dates of origin inside components, against a shuffled-dates baseline."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.stats import binomtest

from .decompose import ComponentSet
from .ingest import DATE_FLAGS, DateRecord

EXCLUSION_REASONS = (*DATE_FLAGS, "no_date")


@dataclass
class ComponentDates:
    component_id: int
    years: list[int]
    excluded: dict[str, int] = field(default_factory=lambda: dict.fromkeys(EXCLUSION_REASONS, 0))

    @property
    def n(self) -> int:
        return len(self.years)


def attach_dates(
    cs: ComponentSet,
    dates: Iterable[DateRecord],
    word_of: Callable[[int], str],
) -> list[ComponentDates]:
    """Collect the usable years of each component's members.

    Members are looked up by their first lemma (case-folded).  Flagged records
    and undated members are excluded and tallied by reason; a record with
    several flags is tallied under the first in ``DATE_FLAGS`` order.
    """
    table = {d.word.lower(): d for d in dates}
    out = []
    for c in cs:
        cd = ComponentDates(c.id, [])
        for v in c.members:
            rec = table.get(word_of(v).lower())
            if rec is None:
                cd.excluded["no_date"] += 1
                continue
            flag = next((f for f in DATE_FLAGS if f in rec.flags), None)
            if flag is not None:
                cd.excluded[flag] += 1
                continue
            cd.years.append(rec.year)
        out.append(cd)
    return out


def median_pairwise_distance(years: Sequence[int]) -> float | None:
    """Median absolute difference over unordered pairs; ``None`` for fewer than 2 years."""
    if len(years) < 2:
        return None
    arr = np.asarray(years, dtype=np.float64)
    i, j = np.triu_indices(len(arr), k=1)
    return float(np.median(np.abs(arr[i] - arr[j])))


@dataclass
class BaselineResult:
    trials: int
    seed: int
    size_profile: list[int]
    # medians[t][p]: median pairwise distance of pseudo-component p in trial t
    medians: np.ndarray

    def pooled(self) -> np.ndarray:
        return self.medians.ravel()

    def quantiles(self, qs=(0.05, 0.25, 0.5, 0.75, 0.95)) -> dict[float, float]:
        pooled = self.pooled()
        return {q: float(np.quantile(pooled, q)) for q in qs}

    def per_component_median(self) -> np.ndarray:
        return np.median(self.medians, axis=0)


def random_baseline(
    all_years: Sequence[int],
    size_profile: Sequence[int],
    trials: int = 1000,
    seed: int = 0,
) -> BaselineResult:
    """Median pairwise distances after shuffling the pooled years into same-size groups.

    Trial ``t`` uses its own generator seeded with ``seed + t``, so results do
    not depend on how trials are scheduled.
    """
    pool = np.asarray(all_years, dtype=np.float64)
    sizes = [int(s) for s in size_profile]
    if any(s < 2 for s in sizes):
        raise ValueError("pseudo-components need at least 2 dated words")
    if sum(sizes) > len(pool):
        raise ValueError(f"size profile needs {sum(sizes)} dates but the pool has {len(pool)}")
    bounds = np.cumsum([0, *sizes])
    out = np.zeros((trials, len(sizes)))
    for t in range(trials):
        perm = np.random.default_rng(seed + t).permutation(pool)
        for p in range(len(sizes)):
            out[t, p] = median_pairwise_distance(perm[bounds[p]:bounds[p + 1]])
    return BaselineResult(trials, seed, sizes, out)


@dataclass
class EtymologySummary:
    per_component: list[dict]
    baseline: BaselineResult
    sign_test_p: float
    below: int
    above: int


def summarize(components: list[ComponentDates], trials: int = 1000, seed: int = 0) -> EtymologySummary:
    """Real per-component statistics plus a baseline with the same size profile."""
    dated = [c for c in components if c.n >= 2]
    rows = [
        {
            "component_id": c.component_id,
            "n": c.n,
            "median_pairwise_distance": median_pairwise_distance(c.years),
            "mean_year": float(np.mean(c.years)),
        }
        for c in dated
    ]
    pool = [y for c in dated for y in c.years]
    base = random_baseline(pool, [c.n for c in dated], trials, seed)
    real = [r["median_pairwise_distance"] for r in rows]
    p, below, above = sign_test_below(real, base.per_component_median())
    return EtymologySummary(rows, base, p, below, above)


def sign_test_below(real: Sequence[float], baseline: Sequence[float]):
    """One-sided sign test that real values tend to fall below their baseline partners.

    Ties are discarded.  Returns ``(p_value, n_below, n_above)``.
    """
    below = sum(1 for r, b in zip(real, baseline) if r < b)
    above = sum(1 for r, b in zip(real, baseline) if r > b)
    if below + above == 0:
        return 1.0, 0, 0
    return float(binomtest(below, below + above, 0.5, alternative="greater").pvalue), below, above


def mean_dates(components: Iterable[ComponentDates], bin_width: int = 50) -> dict[int, int]:
    """Histogram of per-component mean years; keys are bin lower edges."""
    counts: Counter[int] = Counter()
    for c in components:
        if c.n == 0:
            continue
        mean = sum(c.years) / c.n
        counts[int(mean // bin_width) * bin_width] += 1
    return dict(sorted(counts.items()))
