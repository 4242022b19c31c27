"""Statistical tests, descriptive statistics, and agreement measures.

Mann-Whitney uses midranks for ties.  For small samples the p-value is
exact, from the full permutation distribution of the rank sum (counted
with a subset-sum dynamic program over doubled ranks, which is equivalent
to enumerating every assignment of the pooled values to the two groups).
Larger samples use the normal approximation with tie-corrected variance
and a 0.5 continuity correction.  scipy supplies only distribution tail
functions; all test logic is local.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import chi2 as _chi2
from scipy.stats import norm as _norm
from scipy.stats import t as _student_t

from .errors import ArgumentError, DegenerateTableError, ZeroVarianceError

ALTERNATIVES = ("two_sided", "less", "greater")
DEFAULT_EXACT_CUTOFF = 12


@dataclass
class TestResult:
    statistic: float
    p_value: float
    method: str  # "exact" or "normal_approx"
    n1: int
    n2: int

    def __post_init__(self):
        if not (0.0 <= self.p_value <= 1.0):
            raise ArgumentError(f"p-value {self.p_value} outside [0, 1]")


def midranks(values: Sequence[float]) -> list[float]:
    """Fractional ranks (1-based); tied values share the mean of their ranks."""
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _tie_term(values: Sequence[float]) -> float:
    """Sum of t^3 - t over tie groups of the pooled sample."""
    counts: dict[float, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return float(sum(t**3 - t for t in counts.values()))


def _rank_sum_distribution(doubled_ranks: list[int], n1: int) -> dict[int, int]:
    """Number of size-``n1`` subsets of the doubled ranks per doubled sum."""
    total = sum(doubled_ranks)
    # ways[k, s] = subsets of size k with doubled-rank sum s
    ways = np.zeros((n1 + 1, total + 1), dtype=np.int64)
    ways[0, 0] = 1
    for r in doubled_ranks:
        # iterate sizes downward so each element is used at most once
        for k in range(n1, 0, -1):
            ways[k, r:] += ways[k - 1, : total + 1 - r]
    sums = np.nonzero(ways[n1])[0]
    return {int(s): int(ways[n1, s]) for s in sums}


def mann_whitney_u(
    a: Sequence[float],
    b: Sequence[float],
    alternative: str = "two_sided",
    exact_cutoff: int = DEFAULT_EXACT_CUTOFF,
) -> TestResult:
    """Mann-Whitney U test.  ``alternative="less"`` tests a shifted below b.

    The statistic is U for sample ``a``; U(a,b) + U(b,a) = n1*n2 holds
    under the midrank convention.
    """
    if alternative not in ALTERNATIVES:
        raise ArgumentError(f"alternative must be one of {ALTERNATIVES}")
    n1, n2 = len(a), len(b)
    if n1 == 0 or n2 == 0:
        raise ArgumentError("both samples must be non-empty")
    pooled = list(a) + list(b)
    ranks = midranks(pooled)
    r1 = sum(ranks[:n1])
    u1 = r1 - n1 * (n1 + 1) / 2.0

    if n1 + n2 <= exact_cutoff:
        doubled = [int(round(2 * r)) for r in ranks]
        dist = _rank_sum_distribution(doubled, n1)
        total = math.comb(n1 + n2, n1)
        obs = int(round(2 * r1))
        le = sum(c for s, c in dist.items() if s <= obs)
        ge = sum(c for s, c in dist.items() if s >= obs)
        p_less = le / total
        p_greater = ge / total
        if alternative == "less":
            p = p_less
        elif alternative == "greater":
            p = p_greater
        else:
            p = min(1.0, 2.0 * min(p_less, p_greater))
        return TestResult(statistic=u1, p_value=p, method="exact", n1=n1, n2=n2)

    n = n1 + n2
    mu = n1 * n2 / 2.0
    sigma2 = n1 * n2 / 12.0 * ((n + 1) - _tie_term(pooled) / (n * (n - 1)))
    if sigma2 <= 0:
        # every pooled value identical: no evidence either way
        return TestResult(statistic=u1, p_value=1.0, method="normal_approx", n1=n1, n2=n2)
    sigma = math.sqrt(sigma2)
    if alternative == "less":
        p = float(_norm.cdf((u1 - mu + 0.5) / sigma))
    elif alternative == "greater":
        p = float(_norm.sf((u1 - mu - 0.5) / sigma))
    else:
        z = (abs(u1 - mu) - 0.5) / sigma
        p = float(min(1.0, 2.0 * _norm.sf(max(z, 0.0))))
    return TestResult(statistic=u1, p_value=p, method="normal_approx", n1=n1, n2=n2)


def chi_square_2x2(table: Sequence[Sequence[float]]) -> TestResult:
    """Pearson chi-square on a 2x2 table, df=1, no Yates correction."""
    t = np.asarray(table, dtype=float)
    if t.shape != (2, 2):
        raise ArgumentError(f"expected a 2x2 table, got shape {t.shape}")
    if (t < 0).any():
        raise ArgumentError("cell counts must be non-negative")
    row = t.sum(axis=1)
    col = t.sum(axis=0)
    total = t.sum()
    if total == 0:
        raise DegenerateTableError("empty table")
    expected = np.outer(row, col) / total
    if (expected == 0).any():
        raise DegenerateTableError("a zero expected cell makes the test undefined")
    x2 = float(((t - expected) ** 2 / expected).sum())
    p = float(_chi2.sf(x2, df=1))
    return TestResult(statistic=x2, p_value=p, method="normal_approx", n1=int(row[0]), n2=int(row[1]))


def welch_t_test(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Welch's unequal-variance t-test, two-sided."""
    n1, n2 = len(a), len(b)
    if n1 < 2 or n2 < 2:
        raise ArgumentError("each sample needs at least 2 observations")
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    v1 = float(x.var(ddof=1))
    v2 = float(y.var(ddof=1))
    if v1 == 0.0 and v2 == 0.0:
        raise ZeroVarianceError("both samples are constant; t is undefined")
    se1, se2 = v1 / n1, v2 / n2
    t_stat = (float(x.mean()) - float(y.mean())) / math.sqrt(se1 + se2)
    df = (se1 + se2) ** 2 / (se1**2 / (n1 - 1) + se2**2 / (n2 - 1))
    p = float(min(1.0, 2.0 * _student_t.sf(abs(t_stat), df)))
    return TestResult(statistic=t_stat, p_value=p, method="normal_approx", n1=n1, n2=n2)


def describe(sample: Sequence[float]) -> dict[str, float]:
    """Mean, min, max, and median (midpoint convention for even sizes)."""
    if len(sample) == 0:
        raise ArgumentError("sample must be non-empty")
    ordered = sorted(float(v) for v in sample)
    n = len(ordered)
    if n % 2 == 1:
        median = ordered[n // 2]
    else:
        median = (ordered[n // 2 - 1] + ordered[n // 2]) / 2.0
    return {
        "mean": sum(ordered) / n,
        "min": ordered[0],
        "max": ordered[-1],
        "median": median,
    }


def cohen_kappa(labels_a: Sequence, labels_b: Sequence) -> float:
    """Chance-corrected agreement between two equal-length labelings.

    When expected agreement is 1 (both coders constant with the same
    label) kappa is defined as 1: agreement is total and chance correction
    degenerates.
    """
    if len(labels_a) != len(labels_b):
        raise ArgumentError("label sequences must have equal length")
    n = len(labels_a)
    if n == 0:
        raise ArgumentError("label sequences must be non-empty")
    p_o = sum(1 for x, y in zip(labels_a, labels_b) if x == y) / n
    labels = set(labels_a) | set(labels_b)
    p_e = 0.0
    for label in labels:
        p_e += (sum(1 for x in labels_a if x == label) / n) * (
            sum(1 for y in labels_b if y == label) / n
        )
    if p_e >= 1.0:
        return 1.0
    return (p_o - p_e) / (1.0 - p_e)


def multi_coder_agreement(
    label_matrix: Sequence[Sequence],
    possible_values: int,
) -> float:
    """Agreement score for >=2 coders assigning label sets per item.

    Per item: 1 when at least two coders agree perfectly (identical
    sets); otherwise the number of labels shared by at least two coders,
    divided by ``possible_values``.  Returns the mean over items.
    ``possible_values`` is the size of the item label vocabulary.
    """
    if possible_values < 1:
        raise ArgumentError("possible_values must be >= 1")
    items = list(label_matrix)
    if not items:
        raise ArgumentError("label matrix must be non-empty")
    total = 0.0
    for row in items:
        coder_sets = [frozenset(c) if isinstance(c, (set, frozenset, list, tuple)) else frozenset([c]) for c in row]
        if len(coder_sets) < 2:
            raise ArgumentError("each item needs at least two coders")
        perfect = any(
            coder_sets[i] == coder_sets[j]
            for i in range(len(coder_sets))
            for j in range(i + 1, len(coder_sets))
        )
        if perfect:
            total += 1.0
            continue
        label_counts: dict = {}
        for cs in coder_sets:
            for label in cs:
                label_counts[label] = label_counts.get(label, 0) + 1
        agreed = sum(1 for c in label_counts.values() if c >= 2)
        total += agreed / possible_values
    return total / len(items)
