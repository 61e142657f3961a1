"""Statistics pipeline: repeated-measures tests, questionnaire scoring,
and the per-measure text/CSV reports."""

from .battery import (
    RepeatedMeasures,
    TestResult,
    aligned_rank_transform,
    bonferroni_alpha,
    chi2_sf,
    f_sf,
    friedman,
    mann_whitney_u,
    midranks,
    rm_anova_oneway,
)
from .questionnaires import (
    NASA_TLX,
    SSQ,
    SSQ_ITEMS,
    TLX_DIMENSIONS,
    UEQ_S,
    QuestionnaireResponse,
    SsqScores,
    TlxScores,
    UeqScores,
    score_nasa_tlx,
    score_ssq,
    score_ueq_s,
)
from .report import (
    LongRow,
    MeasureReport,
    PairwiseResult,
    analyze_measure,
    format_measure_report,
    load_long_csv,
    matrix_from_long,
    measures_in,
    write_results_csv,
)

__all__ = [
    "RepeatedMeasures",
    "TestResult",
    "aligned_rank_transform",
    "bonferroni_alpha",
    "chi2_sf",
    "f_sf",
    "friedman",
    "mann_whitney_u",
    "midranks",
    "rm_anova_oneway",
    "NASA_TLX",
    "SSQ",
    "SSQ_ITEMS",
    "TLX_DIMENSIONS",
    "UEQ_S",
    "QuestionnaireResponse",
    "SsqScores",
    "TlxScores",
    "UeqScores",
    "score_nasa_tlx",
    "score_ssq",
    "score_ueq_s",
    "LongRow",
    "MeasureReport",
    "PairwiseResult",
    "analyze_measure",
    "format_measure_report",
    "load_long_csv",
    "matrix_from_long",
    "measures_in",
    "write_results_csv",
]
