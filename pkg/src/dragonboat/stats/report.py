"""Long-format data ingestion and the per-measure analysis report.

Input rows are (subject, condition, measure, value); a measure pivots into
a complete subjects x conditions matrix and runs the full battery: a
Friedman omnibus, pairwise Mann-Whitney post-hocs under a Bonferroni
adjusted alpha, and the repeated-measures ANOVA both raw and on aligned
ranks. The text report mirrors the usual Mean (SD) / statistic / p table
layout and prints post-hoc p-values in both raw and Bonferroni-multiplied
form, flagging multiplied values that exceed 1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .battery import (
    RepeatedMeasures,
    TestResult,
    aligned_rank_transform,
    bonferroni_alpha,
    friedman,
    mann_whitney_u,
    rm_anova_oneway,
)


@dataclass(frozen=True)
class LongRow:
    subject: str
    condition: str
    measure: str
    value: float


@dataclass(frozen=True)
class PairwiseResult:
    condition_a: str
    condition_b: str
    result: TestResult
    p_multiplied: float  # raw p times the number of comparisons


@dataclass(frozen=True)
class MeasureReport:
    measure: str
    matrix: RepeatedMeasures
    friedman: TestResult
    pairwise: tuple[PairwiseResult, ...]
    adjusted_alpha: float
    anova: TestResult
    art_anova: TestResult


def load_long_csv(path: str | Path) -> list[LongRow]:
    """Read (subject, condition, measure, value) rows; header optional."""
    rows: list[LongRow] = []
    with open(path, newline="") as fh:
        for lineno, rec in enumerate(csv.reader(fh), start=1):
            if not rec or not rec[0].strip():
                continue
            if len(rec) < 4:
                raise ValueError(f"{path}:{lineno}: expected 4 columns, got {rec!r}")
            try:
                value = float(rec[3])
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise ValueError(f"{path}:{lineno}: bad value {rec[3]!r}")
            rows.append(
                LongRow(rec[0].strip(), rec[1].strip(), rec[2].strip(), value)
            )
    return rows


def matrix_from_long(
    rows: list[LongRow],
    measure: str,
    conditions: tuple[str, ...] | None = None,
) -> RepeatedMeasures:
    """Pivot one measure to a complete matrix; missing cells are an error."""
    cells: dict[tuple[str, str], float] = {}
    subjects: list[str] = []
    found_conditions: list[str] = []
    for row in rows:
        if row.measure != measure:
            continue
        if row.subject not in subjects:
            subjects.append(row.subject)
        if row.condition not in found_conditions:
            found_conditions.append(row.condition)
        key = (row.subject, row.condition)
        if key in cells:
            raise ValueError(f"duplicate cell for {key} in measure {measure!r}")
        cells[key] = row.value
    if conditions is None:
        conditions = tuple(found_conditions)
    if not cells:
        raise ValueError(f"no rows for measure {measure!r}")
    values = []
    for s in subjects:
        row_vals = []
        for c in conditions:
            if (s, c) not in cells:
                raise ValueError(f"missing cell ({s}, {c}) for measure {measure!r}")
            row_vals.append(cells[(s, c)])
        values.append(tuple(row_vals))
    return RepeatedMeasures(
        values=tuple(values), conditions=conditions, subjects=tuple(subjects)
    )


def analyze_measure(
    matrix: RepeatedMeasures, measure: str = "", alpha: float = 0.05
) -> MeasureReport:
    """Run the whole battery for one pivoted measure."""
    k = matrix.k_conditions
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    adjusted = bonferroni_alpha(alpha, len(pairs))
    pairwise = []
    for i, j in pairs:
        res = mann_whitney_u(list(matrix.column(i)), list(matrix.column(j)))
        pairwise.append(
            PairwiseResult(
                condition_a=matrix.conditions[i],
                condition_b=matrix.conditions[j],
                result=res,
                p_multiplied=res.p_value * len(pairs),
            )
        )
    return MeasureReport(
        measure=measure,
        matrix=matrix,
        friedman=friedman(matrix),
        pairwise=tuple(pairwise),
        adjusted_alpha=adjusted,
        anova=rm_anova_oneway(matrix),
        art_anova=rm_anova_oneway(aligned_rank_transform(matrix)),
    )


def mean_sd(values) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


def significance_marks(p: float) -> str:
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""


def _fmt_p(p: float) -> str:
    return "<0.0001" if p < 0.0001 else f"{p:.4f}"


def format_measure_report(report: MeasureReport) -> str:
    """Aligned plain-text tables for one measure."""
    m = report.matrix
    lines = [f"== {report.measure or 'measure'} =="]
    header = ["condition"] + [f"{c}" for c in m.conditions]
    stats_row = ["Mean (SD)"]
    for j in range(m.k_conditions):
        mean, sd = mean_sd(m.column(j))
        stats_row.append(f"{mean:.2f} ({sd:.2f})")
    lines.append(_format_table([header, stats_row]))
    fr = report.friedman
    lines.append(
        f"Friedman: chi2({fr.df:.0f}) = {fr.statistic:.3f},"
        f" p = {_fmt_p(fr.p_value)} {significance_marks(fr.p_value)}".rstrip()
    )
    an = report.anova
    d1, d2 = an.df
    lines.append(
        f"RM-ANOVA: F({d1:.0f}, {d2:.0f}) = {an.statistic:.4f},"
        f" p = {_fmt_p(an.p_value)}, partial eta2 = {an.effect_size:.3f}"
        + (" [degenerate]" if an.degenerate else "")
    )
    art = report.art_anova
    d1, d2 = art.df
    lines.append(
        f"ART-ANOVA: F({d1:.0f}, {d2:.0f}) = {art.statistic:.4f},"
        f" p = {_fmt_p(art.p_value)}, partial eta2 = {art.effect_size:.3f}"
        + (" [degenerate]" if art.degenerate else "")
    )
    lines.append(
        f"Post-hoc Mann-Whitney U, Bonferroni-adjusted alpha ="
        f" {report.adjusted_alpha:.4f} (sphericity: uncorrected)"
    )
    table = [["comparison", "U", "p (raw)", "p (x m)", ""]]
    for pw in report.pairwise:
        flag = significance_marks(pw.result.p_value) if (
            pw.result.p_value < report.adjusted_alpha
        ) else ""
        multiplied = f"{pw.p_multiplied:.4f}"
        if pw.p_multiplied > 1.0:
            multiplied += " (>1)"
        table.append(
            [
                f"{pw.condition_a} vs {pw.condition_b}",
                f"{pw.result.statistic:.1f}",
                _fmt_p(pw.result.p_value),
                multiplied,
                flag,
            ]
        )
    lines.append(_format_table(table))
    return "\n".join(lines) + "\n"


def _format_table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    out = []
    for r in rows:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return "\n".join(out)


def write_results_csv(reports: list[MeasureReport], path: str | Path) -> None:
    """Flat CSV with one row per test result across all analyzed measures."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            ["measure", "test", "comparison", "statistic", "df", "p_value",
             "p_multiplied", "effect_size"]
        )
        for rep in reports:
            fr = rep.friedman
            w.writerow(
                [rep.measure, "friedman", "", f"{fr.statistic:.6f}",
                 f"{fr.df:.0f}", f"{fr.p_value:.6f}", "", ""]
            )
            for label, res in (("rm_anova", rep.anova), ("art_anova", rep.art_anova)):
                d1, d2 = res.df
                w.writerow(
                    [rep.measure, label, "", f"{res.statistic:.6f}",
                     f"({d1:.0f}, {d2:.0f})", f"{res.p_value:.6f}", "",
                     f"{res.effect_size:.6f}"]
                )
            for pw in rep.pairwise:
                w.writerow(
                    [rep.measure, "mann_whitney_u",
                     f"{pw.condition_a} vs {pw.condition_b}",
                     f"{pw.result.statistic:.1f}", f"{pw.result.df:.0f}",
                     f"{pw.result.p_value:.6f}", f"{pw.p_multiplied:.6f}", ""]
                )


def measures_in(rows: list[LongRow]) -> list[str]:
    seen: list[str] = []
    for r in rows:
        if r.measure not in seen:
            seen.append(r.measure)
    return seen
