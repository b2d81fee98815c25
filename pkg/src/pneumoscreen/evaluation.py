"""Dataset manifests, synthetic fixture generation, and the metrics harness.

Per-class accuracy is recall (diagonal over row sum); average accuracy is
trace over total. On balanced test sets the macro mean of per-class
accuracies coincides with the average, and both readings are asserted in
the test suite.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from pneumoscreen import errors
from pneumoscreen.aggregation import ImageDecision
from pneumoscreen.classifier import ClassLabel
from pneumoscreen.images import GrayImage, save_pgm

VALID_SPLITS = ("train", "test", "blind")
VALID_LABELS = ("bacteria", "normal", "virus", "unknown")


@dataclass
class ManifestEntry:
    path: str
    label: ClassLabel | None  # None = unknown (blind set)
    split: str


@dataclass
class DatasetManifest:
    entries: list[ManifestEntry]
    root: Path = field(default_factory=Path)  # paths resolve relative to this

    def split(self, name: str) -> list[ManifestEntry]:
        return [e for e in self.entries if e.split == name]

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for entry in self.entries:
            out[entry.split] = out.get(entry.split, 0) + 1
        return out

    def resolve(self, entry: ManifestEntry) -> Path:
        return self.root / entry.path


def load_manifest(path: str | Path) -> DatasetManifest:
    """Read a `path,label,split` CSV; labels bacteria/normal/virus/unknown."""
    path = Path(path)
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != [
            "path",
            "label",
            "split",
        ]:
            raise errors.BadFormat(f"manifest must have header path,label,split: {path}")
        for row in reader:
            rel, label, split = row["path"].strip(), row["label"].strip(), row["split"].strip()
            if rel in seen:
                raise errors.DuplicatePath(f"duplicate manifest path {rel!r}")
            seen.add(rel)
            if label not in VALID_LABELS:
                raise errors.BadLabel(f"label {label!r} not one of {VALID_LABELS}")
            if split not in VALID_SPLITS:
                raise errors.BadSplit(f"split {split!r} not one of {VALID_SPLITS}")
            entries.append(
                ManifestEntry(
                    path=rel,
                    label=None if label == "unknown" else ClassLabel.from_key(label),
                    split=split,
                )
            )
    return DatasetManifest(entries=entries, root=path.parent)


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", "label", "split"])
        for entry in manifest.entries:
            label = entry.label.key if entry.label is not None else "unknown"
            writer.writerow([entry.path, label, entry.split])


# --- synthetic fixture --------------------------------------------------------

FIXTURE_SIZE = 64


def _blob(grid_y: np.ndarray, grid_x: np.ndarray, cy: float, cx: float,
          sigma: float, amplitude: float) -> np.ndarray:
    return amplitude * np.exp(
        -((grid_y - cy) ** 2 + (grid_x - cx) ** 2) / (2.0 * sigma**2)
    )


def _fixture_image(label: ClassLabel, rng: np.random.Generator) -> np.ndarray:
    """Class-dependent structure, separable by design under raw-pixel features.

    Normal: smooth low-intensity gradient. Bacteria: one bright compact
    blob. Virus: several diffuse blobs hazing most of the field.
    """
    size = FIXTURE_SIZE
    ys, xs = np.mgrid[0:size, 0:size].astype(np.float64)
    if label is ClassLabel.NORMAL:
        base = 25.0 + 70.0 * ys / (size - 1)
    elif label is ClassLabel.BACTERIA:
        cy, cx = rng.uniform(20, size - 20, size=2)
        base = 30.0 + _blob(ys, xs, cy, cx, sigma=7.0, amplitude=170.0)
    else:
        base = np.full((size, size), 30.0)
        for _ in range(5):
            cy, cx = rng.uniform(12, size - 12, size=2)
            base += _blob(ys, xs, cy, cx, sigma=11.0, amplitude=70.0)
    noisy = base + rng.normal(0.0, 5.0, size=(size, size))
    return np.clip(np.rint(noisy), 0, 255).astype(np.uint8)


def generate_fixture(out_dir: str | Path, per_class: int, seed: int) -> DatasetManifest:
    """Write per_class synthetic images for each class plus a manifest.csv.

    One image in five goes to the test split (last in generation order);
    images are PGM so identical seeds produce identical bytes.
    """
    if per_class < 1:
        raise errors.EmptyDataset("per_class must be >= 1")
    out_dir = Path(out_dir)
    rng = np.random.default_rng(seed)
    entries: list[ManifestEntry] = []
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for label in ClassLabel:
            test_count = per_class // 5
            for index in range(per_class):
                name = f"{label.key}_{index:04d}.pgm"
                pixels = _fixture_image(label, rng)
                save_pgm(GrayImage.from_array(pixels, name), out_dir / name)
                split = "test" if index >= per_class - test_count else "train"
                entries.append(ManifestEntry(path=name, label=label, split=split))
        manifest = DatasetManifest(entries=entries, root=out_dir)
        save_manifest(manifest, out_dir / "manifest.csv")
    except OSError as exc:
        raise errors.IoFailure(f"cannot write fixture to {out_dir}: {exc}") from None
    return manifest


# --- metrics ------------------------------------------------------------------

@dataclass
class ConfusionMatrix3:
    """rows = actual, cols = predicted, order Bacteria/Normal/Virus."""

    counts: np.ndarray

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.shape != (3, 3) or np.any(self.counts < 0):
            raise errors.BadFormat("confusion matrix must be 3x3 non-negative")

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass
class EvalReport:
    confusion: ConfusionMatrix3
    per_class_accuracy: tuple[float, float, float]  # percent, recall per class
    average_accuracy: float  # percent, trace/total
    strategy: str = ""
    dataset: str = ""


@dataclass
class BlindSetReport:
    total: int
    virus_rate: float  # percent of decisions labeled virus
    pneumonia_rate: float  # percent of decisions flagged pneumonia
    strategy: str = ""


def confusion(pairs: Sequence[tuple[ClassLabel, ClassLabel]]) -> ConfusionMatrix3:
    """Count (actual, predicted) pairs into the 3x3 matrix."""
    if len(pairs) == 0:
        raise errors.EmptyInput("no prediction pairs")
    counts = np.zeros((3, 3), dtype=np.int64)
    for actual, predicted in pairs:
        counts[int(actual), int(predicted)] += 1
    return ConfusionMatrix3(counts=counts)


def metrics(cm: ConfusionMatrix3, strategy: str = "", dataset: str = "") -> EvalReport:
    if cm.total == 0:
        raise errors.EmptyMatrix("confusion matrix is empty")
    row_sums = cm.counts.sum(axis=1)
    for label in ClassLabel:
        if row_sums[label] == 0:
            raise errors.ZeroRow(f"class {label.key} absent from the test set")
    per_class = tuple(
        float(cm.counts[i, i] / row_sums[i] * 100.0) for i in range(3)
    )
    average = float(np.trace(cm.counts) / cm.total * 100.0)
    return EvalReport(
        confusion=cm,
        per_class_accuracy=per_class,
        average_accuracy=average,
        strategy=strategy,
        dataset=dataset,
    )


def blind_sensitivity(
    decisions: Sequence[ImageDecision], strategy: str = ""
) -> BlindSetReport:
    """Sensitivity on a one-class set: how often Virus / any pneumonia fires."""
    if len(decisions) == 0:
        raise errors.EmptyInput("no decisions")
    total = len(decisions)
    virus = sum(1 for d in decisions if d.label is ClassLabel.VIRUS)
    pneumonia = sum(1 for d in decisions if d.pneumonia)
    return BlindSetReport(
        total=total,
        virus_rate=virus / total * 100.0,
        pneumonia_rate=pneumonia / total * 100.0,
        strategy=strategy,
    )


# --- rendering ----------------------------------------------------------------

def _report_dict(report: EvalReport) -> dict:
    return {
        "dataset": report.dataset,
        "strategy": report.strategy,
        "confusion": report.confusion.counts.tolist(),
        "per_class": {
            label.key: report.per_class_accuracy[label] for label in ClassLabel
        },
        "average": report.average_accuracy,
    }


def evaluate_predictions(
    manifest_path: str | Path,
    predictions_path: str | Path,
    strategy: str = "majority",
    split: str = "test",
    fmt: str = "text",
) -> str:
    """CLI-facing harness: decide every manifest entry from a predictions
    file (JSON Lines) and render metrics (test) or sensitivity (blind)."""
    from pneumoscreen.aggregation import build_contamination_matrix, default_decision, majority_vote
    from pneumoscreen.classifier import load_external_predictions

    manifest = load_manifest(manifest_path)
    preds = load_external_predictions(predictions_path)
    entries = manifest.split(split)
    if not entries:
        raise errors.EmptyInput(f"manifest has no {split!r} entries")

    decisions: list[ImageDecision] = []
    actuals: list[ClassLabel | None] = []
    for entry in entries:
        image_id = Path(entry.path).stem
        whole = preds.whole_for(image_id)
        tiles = preds.tiles_for(image_id)
        cm = None
        if tiles:
            indices = sorted(tiles)
            if indices != list(range(len(indices))):
                raise errors.MissingInput(
                    f"{image_id}: tile predictions not contiguous: {indices}"
                )
            cm = build_contamination_matrix(
                [tiles[i] for i in indices], 1, len(indices), image_id
            )
        if strategy == "whole":
            if whole is None:
                raise errors.MissingInput(f"{image_id}: no whole-image prediction")
            decision = default_decision(whole)
        elif strategy == "majority":
            if cm is None:
                raise errors.MissingInput(f"{image_id}: no tile predictions")
            decision = majority_vote(cm)
        elif strategy == "default":
            decision = default_decision(whole, cm)
        else:
            raise errors.BadFormat(f"unknown strategy {strategy!r}")
        decisions.append(decision)
        actuals.append(entry.label)

    if split == "blind":
        return render_report(blind_sensitivity(decisions, strategy), fmt)

    pairs = []
    for actual, decision in zip(actuals, decisions):
        if actual is None:
            raise errors.UnlabeledSample("test entries must be labeled")
        pairs.append((actual, decision.label))
    report = metrics(confusion(pairs), strategy=strategy, dataset=str(manifest_path))
    return render_report(report, fmt)


def render_report(report: EvalReport | BlindSetReport, fmt: str = "text") -> str:
    """Serialize a report as text, json, or csv. Deterministic."""
    if isinstance(report, BlindSetReport):
        if fmt == "json":
            return json.dumps(
                {
                    "strategy": report.strategy,
                    "total": report.total,
                    "virus_rate": report.virus_rate,
                    "pneumonia_rate": report.pneumonia_rate,
                },
                indent=2,
            )
        if fmt == "csv":
            return (
                "metric,value\n"
                f"total,{report.total}\n"
                f"virus_rate,{report.virus_rate:.2f}\n"
                f"pneumonia_rate,{report.pneumonia_rate:.2f}\n"
            )
        if fmt == "text":
            return (
                f"blind set ({report.strategy or 'unspecified'}), {report.total} images\n"
                f"  virus sensitivity:     {report.virus_rate:6.2f} %\n"
                f"  pneumonia sensitivity: {report.pneumonia_rate:6.2f} %\n"
            )
        raise errors.BadFormat(f"unknown format {fmt!r}")

    if fmt == "json":
        return json.dumps(_report_dict(report), indent=2)
    if fmt == "csv":
        lines = ["class,accuracy"]
        for label in ClassLabel:
            lines.append(f"{label.key},{report.per_class_accuracy[label]:.2f}")
        return "\n".join(lines) + "\n"
    if fmt == "text":
        header = f"{'strategy':<12}" + "".join(f"{l.key:>10}" for l in ClassLabel)
        row = f"{report.strategy or '-':<12}" + "".join(
            f"{report.per_class_accuracy[l]:>10.2f}" for l in ClassLabel
        )
        lines = [header + f"{'average':>10}", row + f"{report.average_accuracy:>10.2f}"]
        lines.append("")
        lines.append("confusion (rows = actual, cols = predicted):")
        for label in ClassLabel:
            counts = " ".join(f"{int(c):>5}" for c in report.confusion.counts[label])
            lines.append(f"  {label.key:<9} {counts}")
        return "\n".join(lines) + "\n"
    raise errors.BadFormat(f"unknown format {fmt!r}")
