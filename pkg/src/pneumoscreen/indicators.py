"""Health indicators: age score, infection rate (static and between two
exams), comorbidity score, and the combined fatality indicator.

All scoring knobs (age table, penalties, the change threshold and the
worsening/improvement adjustments, the critical threshold) are
configuration with fixed defaults; clinical teams are expected to re-tune
them. Pure stdlib on purpose: the scoring CLI path stays dependency-free.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from pneumoscreen import errors

DISCLAIMER = (
    "Research prototype output for decision support only. Not medical advice; "
    "all clinical decisions must be made by qualified health professionals."
)

# Verdict bands are presentation only; they never feed back into the score.
VERDICT_TERMINAL = "terminal"
_BANDS = ((0.75, "critical"), (0.5, "high"), (0.25, "moderate"), (0.0, "low"))


@dataclass(frozen=True)
class AgeBracket:
    min_age: int
    max_age: int | None  # inclusive; None = open-ended top bracket
    fatality_risk_pct: float
    score: float


# Default bracket scores scale with published fatality risk ratios by decade.
DEFAULT_AGE_TABLE: tuple[AgeBracket, ...] = (
    AgeBracket(80, None, 18.0, 100.0),
    AgeBracket(70, 79, 9.8, 54.4),
    AgeBracket(60, 69, 4.6, 25.5),
    AgeBracket(50, 59, 1.3, 7.2),
    AgeBracket(40, 49, 0.4, 2.2),
    AgeBracket(30, 39, 0.18, 1.0),
    AgeBracket(20, 29, 0.09, 0.5),
    AgeBracket(10, 19, 0.02, 0.1),
    AgeBracket(0, 9, 0.01, 0.05),
)


def validate_age_table(table: tuple[AgeBracket, ...]) -> None:
    """Brackets must partition [0, inf) and scores must rise with age."""
    ordered = sorted(table, key=lambda b: b.min_age)
    if not ordered or ordered[0].min_age != 0 or ordered[-1].max_age is not None:
        raise ValueError("age table must start at 0 and end with an open bracket")
    for lower, upper in zip(ordered, ordered[1:]):
        if lower.max_age is None or lower.max_age + 1 != upper.min_age:
            raise ValueError(
                f"age brackets {lower.min_age}-{lower.max_age} and "
                f"{upper.min_age}-... leave a gap or overlap"
            )
        if lower.score >= upper.score:
            raise ValueError("age bracket scores must strictly increase with age")


def _parse_bracket_text(text: str) -> tuple[int, int | None]:
    text = text.strip().replace(" ", "")
    if text.endswith("+"):
        return int(text[:-1]), None
    if text.startswith(">="):
        return int(text[2:]), None
    if "-" in text:
        lo, hi = text.split("-", 1)
        return int(lo), int(hi)
    raise errors.NegativeAge(f"cannot parse age {text!r}")


def age_score(age: float | str, table: tuple[AgeBracket, ...] = DEFAULT_AGE_TABLE) -> float:
    """Score of the bracket containing `age`.

    Accepts a number of years or a bracket string such as "50-59" or "80+",
    which must match a configured bracket exactly.
    """
    if isinstance(age, str):
        lo, hi = _parse_bracket_text(age)
        for bracket in table:
            if bracket.min_age == lo and bracket.max_age == hi:
                return bracket.score
        raise errors.NegativeAge(f"age bracket {age!r} not in the scoring table")
    if not math.isfinite(age) or age < 0:
        raise errors.NegativeAge(f"age must be >= 0, got {age}")
    for bracket in sorted(table, key=lambda b: -b.min_age):
        if age >= bracket.min_age:
            return bracket.score
    raise AssertionError("age table does not cover 0")


def infection_rate(infected: int, tiles: int) -> float:
    """Percentage of grid tiles classified viral, full precision.

    Evaluated as 100*N/n so a fully infected grid scores exactly 100; the
    algebraically equal (100/n)*N can overshoot by one ulp.
    """
    if tiles < 1 or infected < 0 or infected > tiles:
        raise errors.BadCounts(f"need 0 <= infected <= tiles, got {infected}/{tiles}")
    return 100.0 * infected / tiles


def _time_key(t: float | int | str) -> float:
    """Sortable key for a timestamp given as a day index or ISO date."""
    if isinstance(t, str):
        try:
            return float(date.fromisoformat(t).toordinal())
        except ValueError:
            raise errors.NonChronological(f"unparseable timestamp {t!r}") from None
    return float(t)


@dataclass
class ExamObservation:
    """One exam's tile counts at time t; f is its infection-rate percent."""

    t: float | int | str
    infected: int
    tiles: int
    f: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        rate = infection_rate(self.infected, self.tiles)
        if self.f is None:
            self.f = rate
        elif abs(self.f - rate) > 1e-9:
            raise errors.BadCounts(
                f"stored rate {self.f} inconsistent with {self.infected}/{self.tiles}"
            )


def temporal_infection_rate(
    first: ExamObservation,
    second: ExamObservation,
    delta: float = 20.0,
    bonus_pct: float = 20.0,
    malus_pct: float = 20.0,
) -> tuple[float, str]:
    """Infection rate over two timed exams.

    A rise beyond `delta` percentage points is an aggravation and adds
    malus_pct% of f(t2); a fall beyond `delta` is a remission and removes
    bonus_pct% of f(t2); anything in between passes f(t2) through.
    """
    if _time_key(first.t) >= _time_key(second.t):
        raise errors.NonChronological(
            f"exams out of order: {first.t!r} then {second.t!r}"
        )
    if first.tiles != second.tiles:
        raise errors.GridMismatch(
            f"cannot compare rates across grids of {first.tiles} vs {second.tiles} tiles"
        )
    f1, f2 = first.f, second.f
    if f2 > f1 + delta:
        return f2 + (malus_pct * f2) / 100.0, "aggravation"
    if abs(f2 - f1) <= delta:
        return f2, "stability"
    return f2 - (bonus_pct * f2) / 100.0, "remission"


@dataclass
class Comorbidities:
    serious_count: int = 0
    moderate_count: int = 0
    diseases: list[dict] | None = None  # optional [{"name":…, "severity":…}]

    def __post_init__(self):
        if self.serious_count < 0 or self.moderate_count < 0:
            raise errors.BadCounts("comorbidity counts must be >= 0")
        if self.diseases is not None:
            serious = sum(1 for d in self.diseases if d.get("severity") == "serious")
            moderate = sum(1 for d in self.diseases if d.get("severity") == "moderate")
            if (serious, moderate) != (self.serious_count, self.moderate_count):
                raise errors.BadCounts(
                    "comorbidity counts do not match the named disease list"
                )

    @classmethod
    def from_names(cls, diseases: list[dict]) -> "Comorbidities":
        serious = sum(1 for d in diseases if d.get("severity") == "serious")
        moderate = sum(1 for d in diseases if d.get("severity") == "moderate")
        return cls(serious_count=serious, moderate_count=moderate, diseases=diseases)


def comorbidity_score(
    comorbidities: Comorbidities,
    serious_penalty: float = 100.0,
    moderate_penalty: float = 10.0,
) -> float:
    return (
        comorbidities.serious_count * serious_penalty
        + comorbidities.moderate_count * moderate_penalty
    )


@dataclass
class RiskAssessment:
    s1: float  # age score
    s2: float  # infection-rate score
    s3: float  # comorbidity score
    threshold: float
    f: float  # (s1 + s2 + s3) / threshold
    branch: str  # single | aggravation | stability | remission
    verdict: str

    def to_dict(self) -> dict:
        return {
            "s1": self.s1,
            "s2": self.s2,
            "s3": self.s3,
            "threshold": self.threshold,
            "f": self.f,
            "branch": self.branch,
            "verdict": self.verdict,
            "disclaimer": DISCLAIMER,
        }


def verdict_band(f: float) -> str:
    if f >= 1.0:
        return VERDICT_TERMINAL
    for floor_value, name in _BANDS:
        if f >= floor_value:
            return name
    return "low"


def fatality_indicator(
    s1: float, s2: float, s3: float, threshold: float = 200.0, branch: str = "single"
) -> RiskAssessment:
    """Combine the three scores into F = (s1+s2+s3)/threshold.

    F >= 1 is the terminal band: the score says the accumulated factors
    exceed what the calibration considers survivable.
    """
    if threshold <= 0:
        raise errors.BadThreshold(f"threshold must be positive, got {threshold}")
    if min(s1, s2, s3) < 0:
        raise errors.BadCounts("component scores must be >= 0")
    f = (s1 + s2 + s3) / threshold
    return RiskAssessment(
        s1=s1, s2=s2, s3=s3, threshold=threshold, f=f, branch=branch,
        verdict=verdict_band(f),
    )


@dataclass
class ScoringConfig:
    """Every tunable of the indicator suite, JSON-round-trippable."""

    age_table: tuple[AgeBracket, ...] = DEFAULT_AGE_TABLE
    serious_penalty: float = 100.0
    moderate_penalty: float = 10.0
    delta: float = 20.0
    bonus_pct: float = 20.0
    malus_pct: float = 20.0
    threshold: float = 200.0

    def __post_init__(self):
        self.age_table = tuple(self.age_table)
        validate_age_table(self.age_table)
        if self.threshold <= 0:
            raise errors.BadThreshold(f"threshold must be positive, got {self.threshold}")

    def to_dict(self) -> dict:
        return {
            "age_table": [
                {
                    "min_age": b.min_age,
                    "max_age": b.max_age,
                    "fatality_risk_pct": b.fatality_risk_pct,
                    "score": b.score,
                }
                for b in self.age_table
            ],
            "serious_penalty": self.serious_penalty,
            "moderate_penalty": self.moderate_penalty,
            "delta": self.delta,
            "bonus_pct": self.bonus_pct,
            "malus_pct": self.malus_pct,
            "threshold": self.threshold,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ScoringConfig":
        kwargs = dict(doc)
        rows = kwargs.pop("age_table", None)
        if rows is not None:
            kwargs["age_table"] = tuple(
                AgeBracket(
                    min_age=row["min_age"],
                    max_age=row.get("max_age"),
                    fatality_risk_pct=row.get("fatality_risk_pct", 0.0),
                    score=row["score"],
                )
                for row in rows
            )
        return cls(**kwargs)

    @classmethod
    def load(cls, path: str | Path) -> "ScoringConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))


def assess(
    age: float | str,
    comorbidities: Comorbidities,
    latest: ExamObservation,
    previous: ExamObservation | None = None,
    config: ScoringConfig | None = None,
) -> RiskAssessment:
    """Full assessment from a patient profile and one or two exams."""
    config = config or ScoringConfig()
    s1 = age_score(age, config.age_table)
    if previous is not None:
        s2, branch = temporal_infection_rate(
            previous, latest, config.delta, config.bonus_pct, config.malus_pct
        )
    else:
        s2, branch = latest.f, "single"
    s3 = comorbidity_score(
        comorbidities, config.serious_penalty, config.moderate_penalty
    )
    return fatality_indicator(s1, s2, s3, config.threshold, branch)
