"""Scoring for the three standardized session questionnaires.

* UEQ-S: 8 items on 1..7, recentered to -3..+3; first four items form the
  pragmatic quality scale, the last four the hedonic scale.
* NASA-TLX: 6 workload dimensions on 1..7, analyzed raw per dimension.
* SSQ: 16 symptoms on 0..3, scored with the standard Kennedy subscale
  membership and weights.
"""

from __future__ import annotations

from dataclasses import dataclass

UEQ_S = "UEQ_S"
NASA_TLX = "NASA_TLX"
SSQ = "SSQ"

_ITEM_RULES = {
    UEQ_S: (8, 1, 7),
    NASA_TLX: (6, 1, 7),
    SSQ: (16, 0, 3),
}

TLX_DIMENSIONS = (
    "mental_demand",
    "physical_demand",
    "temporal_demand",
    "performance",
    "effort",
    "frustration",
)

# Kennedy SSQ: (symptom, nausea, oculomotor, disorientation); 7 items per scale.
SSQ_ITEMS = (
    ("general_discomfort", 1, 1, 0),
    ("fatigue", 0, 1, 0),
    ("headache", 0, 1, 0),
    ("eye_strain", 0, 1, 0),
    ("difficulty_focusing", 0, 1, 1),
    ("increased_salivation", 1, 0, 0),
    ("sweating", 1, 0, 0),
    ("nausea", 1, 0, 1),
    ("difficulty_concentrating", 1, 1, 0),
    ("fullness_of_head", 0, 0, 1),
    ("blurred_vision", 0, 1, 1),
    ("dizziness_eyes_open", 0, 0, 1),
    ("dizziness_eyes_closed", 0, 0, 1),
    ("vertigo", 0, 0, 1),
    ("stomach_awareness", 1, 0, 0),
    ("burping", 1, 0, 0),
)

SSQ_WEIGHT_NAUSEA = 9.54
SSQ_WEIGHT_OCULOMOTOR = 7.58
SSQ_WEIGHT_DISORIENTATION = 13.92
SSQ_WEIGHT_TOTAL = 3.74


@dataclass(frozen=True)
class QuestionnaireResponse:
    """One filled-in instrument; item count and range are enforced."""

    instrument: str
    items: tuple[int, ...]

    def __post_init__(self):
        rule = _ITEM_RULES.get(self.instrument)
        if rule is None:
            raise ValueError(f"unknown instrument {self.instrument!r}")
        count, lo, hi = rule
        if len(self.items) != count:
            raise ValueError(
                f"{self.instrument} needs {count} items, got {len(self.items)}"
            )
        for i, v in enumerate(self.items, start=1):
            if not (lo <= v <= hi):
                raise ValueError(
                    f"{self.instrument} item {i} = {v} outside [{lo}, {hi}]"
                )


@dataclass(frozen=True)
class UeqScores:
    pragmatic: float
    hedonic: float
    overall: float


@dataclass(frozen=True)
class TlxScores:
    mental_demand: float
    physical_demand: float
    temporal_demand: float
    performance: float
    effort: float
    frustration: float


@dataclass(frozen=True)
class SsqScores:
    nausea: float
    oculomotor: float
    disorientation: float
    total: float


def score_ueq_s(r: QuestionnaireResponse) -> UeqScores:
    """Recenters items to -3..+3 and averages the two quality scales."""
    if r.instrument != UEQ_S:
        raise ValueError("response is not UEQ-S")
    centered = [v - 4 for v in r.items]
    return UeqScores(
        pragmatic=sum(centered[:4]) / 4.0,
        hedonic=sum(centered[4:]) / 4.0,
        overall=sum(centered) / 8.0,
    )


def score_nasa_tlx(r: QuestionnaireResponse) -> TlxScores:
    """Raw per-dimension workload ratings, no weighting."""
    if r.instrument != NASA_TLX:
        raise ValueError("response is not NASA-TLX")
    return TlxScores(*(float(v) for v in r.items))


def score_ssq(r: QuestionnaireResponse) -> SsqScores:
    """Kennedy scoring: weighted subscale sums over the membership table."""
    if r.instrument != SSQ:
        raise ValueError("response is not SSQ")
    raw_n = raw_o = raw_d = 0
    for value, (_, in_n, in_o, in_d) in zip(r.items, SSQ_ITEMS):
        raw_n += value * in_n
        raw_o += value * in_o
        raw_d += value * in_d
    return SsqScores(
        nausea=raw_n * SSQ_WEIGHT_NAUSEA,
        oculomotor=raw_o * SSQ_WEIGHT_OCULOMOTOR,
        disorientation=raw_d * SSQ_WEIGHT_DISORIENTATION,
        total=(raw_n + raw_o + raw_d) * SSQ_WEIGHT_TOTAL,
    )
