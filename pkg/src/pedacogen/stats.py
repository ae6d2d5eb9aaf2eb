"""Nonparametric tests and descriptive statistics.

Wilcoxon signed-rank (paired) and Mann-Whitney U (two-sample), both
two-sided, with exact small-sample p-values and tie-corrected normal
approximations above the exact cutoffs.  Effect sizes are rank-biserial
correlations.  Rank arithmetic is done on doubled ranks so the exact paths
never touch floating point until the final division.

Exact p-value definitions:
  signed-rank: over all 2^n sign assignments of the realized rank multiset,
  the share whose min(W+, W-) is at most the observed one.
  rank-sum: over all C(n_a+n_b, n_a) group labelings of the pooled ranks,
  the share whose min(U_a, U_b) is at most the observed one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

WILCOXON = "wilcoxon_signed_rank"
MANN_WHITNEY = "mann_whitney_u"
EXACT = "exact"
NORMAL_APPROX = "normal_approx"

WILCOXON_EXACT_MAX_N = 20
MANN_WHITNEY_EXACT_MAX_N = 14

DEFAULT_ALPHA = 0.05


class AllZeroDiffs(DomainError):
    code = "all_zero_diffs"


class EmptyGroup(DomainError):
    code = "empty_group"


@dataclass(frozen=True, slots=True)
class StatResult:
    test: str
    statistic: float
    n_effective: int
    p_value: float
    method: str
    effect_r: float
    effect_label: str
    alpha: float = DEFAULT_ALPHA
    significant: bool = False


def effect_label(r: float) -> str:
    magnitude = abs(r)
    if magnitude >= 0.5:
        return "large"
    if magnitude >= 0.3:
        return "medium"
    if magnitude >= 0.1:
        return "small"
    return "negligible"


def _doubled_ranks(values) -> list[int]:
    """1-based average ranks scaled by 2 (ties make halves, never quarters)."""
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    ranks2 = [0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        for k in range(i, j + 1):
            ranks2[order[k]] = i + j + 2
        i = j + 1
    return ranks2


def _tie_sizes(values) -> list[int]:
    sizes: dict = {}
    for v in values:
        sizes[v] = sizes.get(v, 0) + 1
    return [t for t in sizes.values() if t > 1]


def _norm_sf_times_two(z: float) -> float:
    # two-sided p from a z that is <= 0 under the min-statistic convention
    return min(1.0, math.erfc(-z / math.sqrt(2)))


def _signed_rank_exact_p(ranks2: list[int], observed2: int) -> float:
    total2 = sum(ranks2)
    ways = [0] * (total2 + 1)
    ways[0] = 1
    for r in ranks2:
        for s in range(total2, r - 1, -1):
            ways[s] += ways[s - r]
    count = sum(w for s, w in enumerate(ways) if min(s, total2 - s) <= observed2)
    return float(Fraction(count, 1 << len(ranks2)))


def _signed_rank_approx_p(w: float, ranks2: list[int]) -> float:
    # Moments of W+ = sum r_j * Bernoulli(1/2) over the realized rank
    # multiset; the variance reduces to the classical tie-corrected formula.
    # The fourth-cumulant (Edgeworth) term is needed to keep the
    # mid-distribution error under 0.01 for n in [13, 20]; a plain
    # continuity-corrected normal peaks at ~0.013 there.
    mean = math.fsum(ranks2) / 4
    variance = math.fsum(r * r for r in ranks2) / 16
    if variance <= 0:
        return 1.0
    kappa4 = -math.fsum(r**4 for r in ranks2) / 128
    gamma2 = kappa4 / (variance * variance)
    z = (w - mean + 0.5) / math.sqrt(variance)
    phi = math.exp(-z * z / 2) / math.sqrt(2 * math.pi)
    cdf = 0.5 * math.erfc(-z / math.sqrt(2))
    cdf -= phi * (gamma2 / 24) * (z**3 - 3 * z)
    return min(1.0, max(0.0, 2 * cdf))


def wilcoxon_signed_rank(diffs, alternative: str = "two_sided",
                         alpha: float = DEFAULT_ALPHA,
                         method: str = "auto") -> StatResult:
    """Paired signed-rank test over condition differences.

    Zero diffs are dropped (classic handling; n_effective records what
    remains).  Exact enumeration up to n_effective == 20, otherwise a
    tie-corrected normal approximation with continuity correction and a
    fourth-cumulant refinement.
    """
    if alternative != "two_sided":
        raise ValueError("only the two-sided test is implemented")
    nonzero = [d for d in diffs if d != 0]
    n = len(nonzero)
    if n == 0:
        raise AllZeroDiffs("every difference is zero; the test is undefined")
    abs_diffs = [abs(d) for d in nonzero]
    ranks2 = _doubled_ranks(abs_diffs)
    w_plus2 = sum(r for d, r in zip(nonzero, ranks2) if d > 0)
    total2 = n * (n + 1)
    w_minus2 = total2 - w_plus2
    statistic2 = min(w_plus2, w_minus2)

    if method == "auto":
        method = EXACT if n <= WILCOXON_EXACT_MAX_N else NORMAL_APPROX
    if method == EXACT:
        p = _signed_rank_exact_p(ranks2, statistic2)
    else:
        p = _signed_rank_approx_p(statistic2 / 2, ranks2)

    r = (w_plus2 - w_minus2) / total2
    return StatResult(
        test=WILCOXON,
        statistic=statistic2 / 2,
        n_effective=n,
        p_value=p,
        method=method,
        effect_r=r,
        effect_label=effect_label(r),
        alpha=alpha,
        significant=p < alpha,
    )


def _rank_sum_exact_p(ranks2: list[int], n_a: int, observed2: int) -> float:
    n = len(ranks2)
    n_b = n - n_a
    max2 = sum(ranks2)
    # ways[k][s]: labelings choosing k of the pooled ranks with doubled sum s
    ways = [[0] * (max2 + 1) for _ in range(n_a + 1)]
    ways[0][0] = 1
    for r in ranks2:
        for k in range(min(n_a, n), 0, -1):
            row, prev = ways[k], ways[k - 1]
            for s in range(max2, r - 1, -1):
                if prev[s - r]:
                    row[s] += prev[s - r]
    offset = n_a * (n_a + 1)
    count = 0
    for s, w in enumerate(ways[n_a]):
        if not w:
            continue
        u_a2 = s - offset
        if min(u_a2, 2 * n_a * n_b - u_a2) <= observed2:
            count += w
    return float(Fraction(count, math.comb(n, n_a)))


def _rank_sum_approx_p(u: float, n_a: int, n_b: int, ties: list[int]) -> float:
    n = n_a + n_b
    mean = n_a * n_b / 2
    variance = n_a * n_b * (n + 1) / 12
    variance -= n_a * n_b * sum(t**3 - t for t in ties) / (12 * n * (n - 1))
    if variance <= 0:
        return 1.0
    z = (u - mean + 0.5) / math.sqrt(variance)
    return _norm_sf_times_two(z)


def mann_whitney_u(a, b, alternative: str = "two_sided",
                   alpha: float = DEFAULT_ALPHA,
                   method: str = "auto") -> StatResult:
    """Two-sample rank test; U = min(U_a, U_b) over joint average ranks.

    Exact enumeration when n_a + n_b <= 14, otherwise tie-corrected normal
    approximation with continuity correction.  effect_r is signed toward
    the group with larger ranks: positive means `a` ranks higher.
    """
    if alternative != "two_sided":
        raise ValueError("only the two-sided test is implemented")
    a, b = list(a), list(b)
    if not a or not b:
        raise EmptyGroup("both groups must be nonempty")
    n_a, n_b = len(a), len(b)
    pooled = a + b
    ranks2 = _doubled_ranks(pooled)
    r_a2 = sum(ranks2[:n_a])
    u_a2 = r_a2 - n_a * (n_a + 1)
    u_b2 = 2 * n_a * n_b - u_a2
    statistic2 = min(u_a2, u_b2)

    if method == "auto":
        method = EXACT if n_a + n_b <= MANN_WHITNEY_EXACT_MAX_N else NORMAL_APPROX
    if method == EXACT:
        p = _rank_sum_exact_p(ranks2, n_a, statistic2)
    else:
        p = _rank_sum_approx_p(statistic2 / 2, n_a, n_b, _tie_sizes(pooled))

    r = (u_a2 - u_b2) / (2 * n_a * n_b)
    return StatResult(
        test=MANN_WHITNEY,
        statistic=statistic2 / 2,
        n_effective=n_a + n_b,
        p_value=p,
        method=method,
        effect_r=r,
        effect_label=effect_label(r),
        alpha=alpha,
        significant=p < alpha,
    )


def mean_sd(values) -> tuple[float, float]:
    """Mean and sample SD (n-1); two-pass with compensated summation."""
    values = list(values)
    if not values:
        raise EmptyGroup("cannot describe an empty group")
    n = len(values)
    mean = math.fsum(values) / n
    if n == 1:
        return mean, 0.0
    variance = math.fsum((x - mean) ** 2 for x in values) / (n - 1)
    return mean, math.sqrt(variance)
