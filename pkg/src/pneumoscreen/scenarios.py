"""Bundled demonstration scenarios for the `simulate` CLI verb.

Nine synthetic patient profiles exercise the fatality indicator across
the age/infection/comorbidity space, and five exam pairs exercise every
branch of the two-exam infection-rate rule. They double as the golden
inputs for the acceptance suite.
"""

from __future__ import annotations

from pneumoscreen.indicators import (
    Comorbidities,
    ExamObservation,
    ScoringConfig,
    assess,
    temporal_infection_rate,
)

DEMO_PATIENTS = (
    {"name": "patient-1", "age": 82, "infected": 3, "tiles": 9, "serious": 0, "moderate": 1},
    {"name": "patient-2", "age": "50-59", "infected": 4, "tiles": 9, "serious": 0, "moderate": 4},
    {"name": "patient-3", "age": "70-79", "infected": 1, "tiles": 9, "serious": 1, "moderate": 0},
    {"name": "patient-4", "age": 82, "infected": 1, "tiles": 9, "serious": 1, "moderate": 0},
    {"name": "patient-5", "age": "30-39", "infected": 5, "tiles": 9, "serious": 1, "moderate": 0},
    {"name": "patient-6", "age": "10-19", "infected": 7, "tiles": 9, "serious": 1, "moderate": 0},
    {"name": "patient-7", "age": "10-19", "infected": 4, "tiles": 9, "serious": 0, "moderate": 0},
    {"name": "patient-8", "age": "50-59", "infected": 2, "tiles": 9, "serious": 0, "moderate": 4},
    {"name": "patient-9", "age": "40-49", "infected": 3, "tiles": 9, "serious": 0, "moderate": 1},
)

# Real two-exam timelines observed in published COVID-19 case imagery,
# reduced to virus-tile counts on a 3x3 grid.
DEMO_EXAM_PAIRS = (
    {"name": "pair-1", "tiles": 9, "first": 9, "second": 9, "days_apart": 7},
    {"name": "pair-2", "tiles": 9, "first": 1, "second": 2, "days_apart": 5},
    {"name": "pair-3", "tiles": 9, "first": 5, "second": 5, "days_apart": 8},
    {"name": "pair-4", "tiles": 9, "first": 6, "second": 9, "days_apart": 1},
    {"name": "pair-5", "tiles": 9, "first": 7, "second": 8, "days_apart": 4},
)


def run_demo(config: ScoringConfig | None = None) -> dict:
    """Compute every bundled scenario; the CLI emits this as JSON."""
    config = config or ScoringConfig()

    patients = []
    for case in DEMO_PATIENTS:
        result = assess(
            age=case["age"],
            comorbidities=Comorbidities(
                serious_count=case["serious"], moderate_count=case["moderate"]
            ),
            latest=ExamObservation(t=0, infected=case["infected"], tiles=case["tiles"]),
            config=config,
        )
        patients.append({**case, **result.to_dict()})

    pairs = []
    for case in DEMO_EXAM_PAIRS:
        first = ExamObservation(t=0, infected=case["first"], tiles=case["tiles"])
        second = ExamObservation(
            t=case["days_apart"], infected=case["second"], tiles=case["tiles"]
        )
        s2, branch = temporal_infection_rate(
            first, second, config.delta, config.bonus_pct, config.malus_pct
        )
        pairs.append(
            {**case, "f1": first.f, "f2": second.f, "s2": s2, "branch": branch}
        )

    return {"patients": patients, "exam_pairs": pairs}
