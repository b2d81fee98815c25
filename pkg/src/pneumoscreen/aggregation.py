"""Per-tile predictions to a contamination matrix and whole-image decisions.

The contamination matrix stores each grid cell's distribution and argmax
label; its virus-cell count N feeds the infection-rate indicator. Two
whole-image regimes are provided: plurality over cell labels (majority)
and a single whole-image distribution (default).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from pneumoscreen import errors
from pneumoscreen.classifier import ClassLabel, argmax_label, validate_probs

_PRIORITY = (ClassLabel.VIRUS, ClassLabel.BACTERIA, ClassLabel.NORMAL)


@dataclass
class ContaminationMatrix:
    rows: int
    cols: int
    probs: np.ndarray  # (rows, cols, 3)
    labels: np.ndarray  # (rows, cols) int, ClassLabel values
    image_id: str
    virus_count: int  # N: cells whose argmax label is Virus

    @property
    def cell_count(self) -> int:
        return self.rows * self.cols

    def label_at(self, row: int, col: int) -> ClassLabel:
        return ClassLabel(int(self.labels[row, col]))

    def to_dict(self) -> dict:
        return {
            "image_id": self.image_id,
            "rows": self.rows,
            "cols": self.cols,
            "labels": [
                [self.label_at(i, j).key for j in range(self.cols)]
                for i in range(self.rows)
            ],
            "probs": self.probs.tolist(),
            "N": self.virus_count,
        }


@dataclass
class ImageDecision:
    image_id: str
    label: ClassLabel
    strategy: str  # "majority" or "default"

    @property
    def pneumonia(self) -> bool:
        return self.label is not ClassLabel.NORMAL

    def to_dict(self) -> dict:
        return {
            "image_id": self.image_id,
            "label": self.label.key,
            "strategy": self.strategy,
            "pneumonia": self.pneumonia,
        }


def build_contamination_matrix(
    tile_probs: Sequence[Sequence[float]], rows: int, cols: int, image_id: str = ""
) -> ContaminationMatrix:
    """Assemble the grid from row-major per-tile distributions."""
    if len(tile_probs) != rows * cols:
        raise errors.LengthMismatch(
            f"{len(tile_probs)} tile predictions for a {rows}x{cols} grid"
        )
    probs = np.stack([validate_probs(p) for p in tile_probs]).reshape(rows, cols, 3)
    labels = np.empty((rows, cols), dtype=np.int64)
    for i in range(rows):
        for j in range(cols):
            labels[i, j] = int(argmax_label(probs[i, j]))
    virus_count = int((labels == int(ClassLabel.VIRUS)).sum())
    return ContaminationMatrix(
        rows=rows,
        cols=cols,
        probs=probs,
        labels=labels,
        image_id=image_id,
        virus_count=virus_count,
    )


def majority_vote(cm: ContaminationMatrix) -> ImageDecision:
    """Most frequent cell label; count ties go to the larger summed
    probability over the tied classes, then Virus > Bacteria > Normal."""
    counts = np.bincount(cm.labels.ravel(), minlength=3)
    top = counts.max()
    tied = [label for label in _PRIORITY if counts[label] == top]
    if len(tied) > 1:
        sums = cm.probs.reshape(-1, 3).sum(axis=0)
        best = max(sums[label] for label in tied)
        tied = [label for label in tied if sums[label] == best]
    return ImageDecision(image_id=cm.image_id, label=tied[0], strategy="majority")


def default_decision(
    whole_image_probs: Sequence[float] | None = None,
    cm: ContaminationMatrix | None = None,
) -> ImageDecision:
    """Single whole-image label: argmax of the supplied distribution, or of
    the cell-wise mean when only tiles exist."""
    if whole_image_probs is not None:
        probs = validate_probs(whole_image_probs)
        image_id = cm.image_id if cm is not None else ""
    elif cm is not None:
        probs = cm.probs.reshape(-1, 3).mean(axis=0)
        image_id = cm.image_id
    else:
        raise errors.MissingInput("need whole-image probabilities or a contamination matrix")
    return ImageDecision(image_id=image_id, label=argmax_label(probs), strategy="default")


def presume_covid(decision: ImageDecision, epidemic_context: bool) -> bool:
    """Screening flag only: viral pneumonia during an epidemic is presumed
    worth escalating. Never a diagnosis."""
    return bool(epidemic_context and decision.label is ClassLabel.VIRUS)
