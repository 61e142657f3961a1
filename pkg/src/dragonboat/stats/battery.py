"""Repeated-measures test battery for session data.

The within-subject pipeline mirrors the evaluation protocol: an omnibus
Friedman test per measure, Mann-Whitney U post-hocs under a Bonferroni
adjusted alpha, and a one-way repeated-measures ANOVA with partial eta
squared (optionally on aligned ranks for non-normal measures).

Everything works on a complete subjects x conditions matrix; rank-based
statistics use mid-ranks for ties throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.special import betainc, gammaincc

_RELATIVE_ZERO = 1e-12  # sums-of-squares below this share of the total are noise


@dataclass(frozen=True)
class RepeatedMeasures:
    """Complete n_subjects x k_conditions matrix of one measure."""

    values: tuple[tuple[float, ...], ...]
    conditions: tuple[str, ...] = ()
    subjects: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.values)
        if n < 2:
            raise ValueError("need at least two subjects")
        k = len(self.values[0])
        if k < 2:
            raise ValueError("need at least two conditions")
        for row in self.values:
            if len(row) != k:
                raise ValueError("ragged matrix")
            for v in row:
                if v is None or not math.isfinite(v):
                    raise ValueError("matrix cells must be finite (no missing data)")
        if not self.conditions:
            object.__setattr__(
                self, "conditions", tuple(f"c{j + 1}" for j in range(k))
            )
        if not self.subjects:
            object.__setattr__(self, "subjects", tuple(f"s{i + 1}" for i in range(n)))
        if len(self.conditions) != k or len(self.subjects) != n:
            raise ValueError("label lengths must match the matrix shape")

    @property
    def n_subjects(self) -> int:
        return len(self.values)

    @property
    def k_conditions(self) -> int:
        return len(self.values[0])

    def column(self, j: int) -> tuple[float, ...]:
        return tuple(row[j] for row in self.values)


@dataclass(frozen=True)
class TestResult:
    statistic: float
    statistic_name: str  # chi2 | U | F
    df: float | tuple[float, float]
    p_value: float
    effect_size: float | None = None
    degenerate: bool = False
    method: str = ""


def chi2_sf(x: float, df: float) -> float:
    """Upper tail of the chi-square distribution."""
    if x <= 0.0:
        return 1.0
    return float(gammaincc(df / 2.0, x / 2.0))


def f_sf(x: float, df1: float, df2: float) -> float:
    """Upper tail of the F distribution."""
    if x <= 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    return float(betainc(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * x)))


def normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def midranks(values) -> list[float]:
    """Fractional ranks, 1-based; ties share the mean of their positions."""
    return [r / 2.0 for r in scaled_midranks(values)]


def scaled_midranks(values) -> list[int]:
    """Twice the mid-ranks, which are always integers (exact tie handling)."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    out = [0] * len(values)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        doubled = (i + 1) + (j + 1)  # first rank + last rank of the tie group
        for pos in range(i, j + 1):
            out[order[pos]] = doubled
        i = j + 1
    return out


def friedman(m: RepeatedMeasures) -> TestResult:
    """Friedman rank test across conditions, tie-corrected.

    Each subject's row is ranked separately; the chi-square statistic with
    k-1 degrees of freedom measures how unevenly the rank sums spread over
    conditions. Fully tied data (every row constant) degenerates to a zero
    statistic with p = 1.
    """
    n, k = m.n_subjects, m.k_conditions
    rank_sums = [0.0] * k
    tie_term = 0
    for row in m.values:
        ranks = midranks(row)
        for j, r in enumerate(ranks):
            rank_sums[j] += r
        seen: dict[float, int] = {}
        for v in row:
            seen[v] = seen.get(v, 0) + 1
        for count in seen.values():
            tie_term += count**3 - count
    numerator = 12.0 / (n * k * (k + 1)) * sum(r * r for r in rank_sums) - 3.0 * n * (
        k + 1
    )
    correction = 1.0 - tie_term / (n * k * (k * k - 1))
    if correction <= 0.0:
        return TestResult(
            statistic=0.0,
            statistic_name="chi2",
            df=float(k - 1),
            p_value=1.0,
            degenerate=True,
            method="friedman",
        )
    stat = numerator / correction
    if stat < 0.0:  # guard rounding residue when rank sums are all equal
        stat = 0.0
    return TestResult(
        statistic=stat,
        statistic_name="chi2",
        df=float(k - 1),
        p_value=chi2_sf(stat, k - 1),
        method="friedman",
    )


def mann_whitney_u(a, b, mode: str = "auto") -> TestResult:
    """Two-sided Mann-Whitney U (Wilcoxon rank-sum) test.

    Reports U = min(U_a, U_b). Small samples (combined n <= 16, or
    mode="exact") get the exact two-sided p over all label assignments,
    computed by dynamic programming over the pooled mid-ranks so ties are
    handled exactly; larger samples use the tie-corrected normal
    approximation with continuity correction.
    """
    if not a or not b:
        raise ValueError("both samples must be non-empty")
    if mode not in ("auto", "exact", "normal_approx"):
        raise ValueError(f"unknown mode {mode!r}")
    na, nb = len(a), len(b)
    pooled = list(a) + list(b)
    scaled = scaled_midranks(pooled)  # 2x ranks, exact integers
    sum_a_scaled = sum(scaled[:na])
    u_a_scaled = sum_a_scaled - na * (na + 1)  # 2 * U_a
    u_b_scaled = 2 * na * nb - u_a_scaled
    u_scaled = min(u_a_scaled, u_b_scaled)
    if mode == "exact" or (mode == "auto" and na + nb <= 16):
        p = _mwu_exact_p(scaled, na, u_scaled)
        method = "exact"
    else:
        p = _mwu_normal_p(scaled, na, nb, u_scaled)
        method = "normal_approx"
    return TestResult(
        statistic=u_scaled / 2.0,
        statistic_name="U",
        df=float(na + nb - 2),
        p_value=p,
        method=f"mann_whitney_{method}",
    )


def _mwu_exact_p(scaled_ranks: list[int], na: int, u_obs_scaled: int) -> float:
    """P(min(U_a, U_b) <= observed) over all C(n, na) label splits."""
    n = len(scaled_ranks)
    nb = n - na
    # ways[c] maps a scaled rank-sum to the number of c-subsets achieving it
    ways: list[dict[int, int]] = [dict() for _ in range(na + 1)]
    ways[0][0] = 1
    for r in scaled_ranks:
        for c in range(min(na, n), 0, -1):
            prev = ways[c - 1]
            if not prev:
                continue
            cur = ways[c]
            for s, count in prev.items():
                cur[s + r] = cur.get(s + r, 0) + count
    hits = 0
    total = 0
    for s, count in ways[na].items():
        total += count
        ua = s - na * (na + 1)
        if min(ua, 2 * na * nb - ua) <= u_obs_scaled:
            hits += count
    return hits / total


def _mwu_normal_p(
    scaled_ranks: list[int], na: int, nb: int, u_scaled: int
) -> float:
    n = na + nb
    tie_term = 0
    counts: dict[int, int] = {}
    for r in scaled_ranks:
        counts[r] = counts.get(r, 0) + 1
    for c in counts.values():
        tie_term += c**3 - c
    var = (na * nb / 12.0) * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0.0:
        return 1.0
    u = u_scaled / 2.0
    mean = na * nb / 2.0
    z = (u - mean + 0.5) / math.sqrt(var)  # U = min side, so continuity adds
    return min(1.0, 2.0 * normal_sf(-z))


def bonferroni_alpha(alpha: float, m_comparisons: int) -> float:
    """Adjusted per-comparison alpha for m planned comparisons."""
    if m_comparisons < 1:
        raise ValueError("need at least one comparison")
    if not (0.0 < alpha <= 1.0):
        raise ValueError("alpha must be in (0, 1]")
    return alpha / m_comparisons


def rm_anova_oneway(m: RepeatedMeasures) -> TestResult:
    """One-way repeated-measures ANOVA with partial eta squared.

    F = MS_condition / MS_error on (k-1, (n-1)(k-1)) degrees of freedom;
    subject variance is removed before the error term. Zero error variance
    is reported as a degenerate boundary (p = 0 when an effect remains,
    p = 1 when the matrix is flat).
    """
    n, k = m.n_subjects, m.k_conditions
    grand = sum(sum(row) for row in m.values) / (n * k)
    row_means = [sum(row) / k for row in m.values]
    col_means = [sum(m.column(j)) / n for j in range(k)]
    ss_cond = n * sum((cm - grand) ** 2 for cm in col_means)
    ss_subj = k * sum((rm - grand) ** 2 for rm in row_means)
    ss_total = sum((v - grand) ** 2 for row in m.values for v in row)
    ss_err = ss_total - ss_cond - ss_subj
    if ss_err < 0.0:
        ss_err = 0.0
    df_cond = k - 1
    df_err = (n - 1) * (k - 1)
    zero = _RELATIVE_ZERO * max(ss_total, 1.0)
    if ss_err <= zero:
        if ss_cond <= zero:
            return TestResult(
                statistic=0.0,
                statistic_name="F",
                df=(float(df_cond), float(df_err)),
                p_value=1.0,
                effect_size=0.0,
                degenerate=True,
                method="rm_anova",
            )
        return TestResult(
            statistic=math.inf,
            statistic_name="F",
            df=(float(df_cond), float(df_err)),
            p_value=0.0,
            effect_size=1.0,
            degenerate=True,
            method="rm_anova",
        )
    f = (ss_cond / df_cond) / (ss_err / df_err)
    eta_sq = ss_cond / (ss_cond + ss_err)
    return TestResult(
        statistic=f,
        statistic_name="F",
        df=(float(df_cond), float(df_err)),
        p_value=f_sf(f, df_cond, df_err),
        effect_size=eta_sq,
        method="rm_anova",
    )


def aligned_rank_transform(m: RepeatedMeasures) -> RepeatedMeasures:
    """Align-then-rank preprocessing for the one-way within-subject design.

    Subject effects are stripped (cell minus its subject mean, plus the
    grand mean) and the aligned values are mid-ranked jointly across the
    whole matrix; run rm_anova_oneway on the result to get the
    rank-transformed ANOVA.
    """
    n, k = m.n_subjects, m.k_conditions
    grand = sum(sum(row) for row in m.values) / (n * k)
    aligned: list[float] = []
    for row in m.values:
        row_mean = sum(row) / k
        aligned.extend(v - row_mean + grand for v in row)
    ranks = midranks(aligned)
    values = tuple(
        tuple(ranks[i * k : (i + 1) * k]) for i in range(n)
    )
    return RepeatedMeasures(
        values=values, conditions=m.conditions, subjects=m.subjects
    )
