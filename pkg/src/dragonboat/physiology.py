"""Heart-rate ingestion, age-based normalization, and calorie estimation.

Heart rate is normalized against an age-predicted maximum (211 - 0.64 *
age) so sessions of differently aged paddlers compare on a common 0..1
scale. Energy expenditure uses the Keytel linear heart-rate regression,
integrated over the session.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)

DEFAULT_WEIGHT_KG = 70.0

BPM_FLOOR = 20.0
BPM_CEILING = 250.0

# kcal/min = (a + b*HR + c*weight_kg + d*age) / 4.184, clipped at zero.
KEYTEL_COEFFS = {
    "male": (-55.0969, 0.6309, 0.1988, 0.2017),
    "female": (-20.4022, 0.4472, -0.1263, 0.0740),
}


@dataclass(frozen=True)
class ParticipantProfile:
    age: float
    weight: float | None = None
    sex: str = "unspecified"

    def __post_init__(self):
        if self.age <= 0:
            raise ValueError("age must be positive")
        if self.weight is not None and self.weight <= 0:
            raise ValueError("weight must be positive")
        if self.sex not in ("male", "female", "unspecified"):
            raise ValueError(f"sex must be male/female/unspecified, got {self.sex!r}")


@dataclass(frozen=True)
class HeartSample:
    t: float
    bpm: float

    def __post_init__(self):
        if not (BPM_FLOOR < self.bpm < BPM_CEILING):
            raise ValueError(f"bpm {self.bpm} outside ({BPM_FLOOR}, {BPM_CEILING})")


@dataclass(frozen=True)
class SessionPhysiology:
    avg_hr: float
    hr_max_predicted: float
    avg_hr_pct: float
    kcal: float
    default_weight_used: bool = False


def hr_max(age: float) -> float:
    """Age-predicted maximum heart rate: 211 - 0.64 * age."""
    if age <= 0:
        raise ValueError("age must be positive")
    return 211.0 - 0.64 * age


def _check_series(samples: Sequence[HeartSample]) -> None:
    for a, b in zip(samples, samples[1:]):
        if b.t <= a.t:
            raise ValueError("heart samples must have strictly increasing t")


def time_weighted_mean_bpm(samples: Sequence[HeartSample]) -> float:
    """Trapezoidal mean of the series; robust to irregular band sampling."""
    if not samples:
        raise ValueError("empty heart-rate series")
    _check_series(samples)
    if len(samples) == 1:
        return samples[0].bpm
    area = 0.0
    for a, b in zip(samples, samples[1:]):
        area += 0.5 * (a.bpm + b.bpm) * (b.t - a.t)
    span = samples[-1].t - samples[0].t
    return area / span


def avg_hr_pct(samples: Sequence[HeartSample], age: float) -> float:
    """Time-weighted mean heart rate over the predicted max, clamped to [0, 1]."""
    pct = time_weighted_mean_bpm(samples) / hr_max(age)
    return min(pct, 1.0)


def kcal_per_minute(bpm: float, weight_kg: float, age: float, sex: str) -> float:
    """Instantaneous burn rate from the Keytel regression, never negative.

    The unspecified-sex rate is the mean of the male and female estimates.
    """
    if sex == "unspecified":
        male = kcal_per_minute(bpm, weight_kg, age, "male")
        female = kcal_per_minute(bpm, weight_kg, age, "female")
        return (male + female) / 2.0
    a, b, c, d = KEYTEL_COEFFS[sex]
    rate = (a + b * bpm + c * weight_kg + d * age) / 4.184
    return max(rate, 0.0)


def estimate_kcal(
    samples: Sequence[HeartSample], profile: ParticipantProfile
) -> float:
    """Session energy in kilocalories, trapezoid-integrated over the series.

    Needs at least two samples; a zero-duration series burns nothing. A
    missing body weight falls back to the default and logs a diagnostic.
    """
    if len(samples) < 2:
        raise ValueError("need at least two heart samples to integrate")
    _check_series(samples)
    weight = profile.weight
    if weight is None:
        weight = DEFAULT_WEIGHT_KG
        logger.warning(
            "no body weight in profile; assuming %.0f kg for calorie estimate",
            DEFAULT_WEIGHT_KG,
        )
    total = 0.0
    for a, b in zip(samples, samples[1:]):
        rate_a = kcal_per_minute(a.bpm, weight, profile.age, profile.sex)
        rate_b = kcal_per_minute(b.bpm, weight, profile.age, profile.sex)
        total += 0.5 * (rate_a + rate_b) * (b.t - a.t) / 60.0
    return total


def summarize(
    samples: Sequence[HeartSample], profile: ParticipantProfile
) -> SessionPhysiology:
    """Bundle the per-session physiology metrics for the record."""
    return SessionPhysiology(
        avg_hr=time_weighted_mean_bpm(samples),
        hr_max_predicted=hr_max(profile.age),
        avg_hr_pct=avg_hr_pct(samples, profile.age),
        kcal=estimate_kcal(samples, profile) if len(samples) >= 2 else 0.0,
        default_weight_used=profile.weight is None,
    )


def load_hr_csv(path: str | Path) -> list[HeartSample]:
    """Read a (t_seconds, bpm) CSV; a header row is skipped if present."""
    samples: list[HeartSample] = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not row[0].strip():
                continue
            try:
                t, bpm = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                if lineno == 1:
                    continue  # header
                raise ValueError(f"{path}:{lineno}: bad heart-rate row {row!r}")
            samples.append(HeartSample(t=t, bpm=bpm))
    return samples
