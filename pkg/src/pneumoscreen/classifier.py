"""Three-way chest X-ray prediction.

Two interchangeable sources of class probabilities:

* a small trainable linear-softmax model over deterministic pixel
  features, fully verifiable (exact gradients, seeded init), and
* an adapter that ingests externally produced per-image / per-tile
  predictions from JSON Lines, for plugging in any full-scale CNN.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from pneumoscreen import errors
from pneumoscreen.images import GrayImage, resize_raw

PROB_SUM_TOL = 1e-9
RENORM_TOL = 1e-6
FEATURE_SPEC = "raw32x32+meanstd-v1"
FEATURE_DIM = 32 * 32 + 2
WHOLE_IMAGE = -1  # tile index meaning "prediction for the whole image"


class ClassLabel(IntEnum):
    """Canonical class order; doubles as confusion-matrix row/column order."""

    BACTERIA = 0
    NORMAL = 1
    VIRUS = 2

    @property
    def key(self) -> str:
        return self.name.lower()

    @classmethod
    def from_key(cls, key: str) -> "ClassLabel":
        try:
            return cls[key.upper()]
        except KeyError:
            raise errors.BadLabel(f"unknown class label {key!r}") from None


def validate_probs(probs: Sequence[float], renormalize: bool = False) -> np.ndarray:
    """Check a 3-way distribution; optionally fix tiny serialization drift."""
    p = np.asarray(probs, dtype=np.float64)
    if p.shape != (3,):
        raise errors.BadDistribution(f"expected 3 probabilities, got shape {p.shape}")
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        raise errors.BadDistribution(f"probabilities must be finite and >= 0: {p.tolist()}")
    total = float(p.sum())
    tol = RENORM_TOL if renormalize else PROB_SUM_TOL
    if abs(total - 1.0) > tol:
        raise errors.BadDistribution(f"probabilities sum to {total}, not 1")
    if renormalize and total != 1.0:
        p = p / total
    return p


def argmax_label(probs: np.ndarray) -> ClassLabel:
    """Argmax with exact ties resolved Virus > Bacteria > Normal.

    Screening prefers the costly-to-miss class when scores tie.
    """
    top = probs.max()
    for label in (ClassLabel.VIRUS, ClassLabel.BACTERIA, ClassLabel.NORMAL):
        if probs[label] == top:
            return label
    raise AssertionError("unreachable")


# --- feature extraction -----------------------------------------------------

def extract_features(img: GrayImage) -> np.ndarray:
    """Deterministic features: 32x32 raw pixels in [0,1] plus mean and std."""
    small = resize_raw(img, 32, 32)
    flat = small.pixels.astype(np.float64).ravel() / 255.0
    return np.concatenate([flat, [flat.mean(), flat.std()]])


# --- linear-softmax model ----------------------------------------------------

@dataclass
class ModelParams:
    weights: np.ndarray  # (3, FEATURE_DIM)
    bias: np.ndarray  # (3,)
    feature_spec: str = FEATURE_SPEC
    seed: int = 0

    def check_finite(self) -> None:
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.bias))):
            raise errors.NonFiniteParams("model parameters contain NaN or Inf")

    def copy(self) -> "ModelParams":
        return ModelParams(
            weights=self.weights.copy(),
            bias=self.bias.copy(),
            feature_spec=self.feature_spec,
            seed=self.seed,
        )


@dataclass
class Gradients:
    weights: np.ndarray
    bias: np.ndarray


def init_model(seed: int) -> ModelParams:
    """Seeded uniform weights in [-0.01, 0.01], zero bias."""
    rng = np.random.default_rng(seed)
    weights = rng.uniform(-0.01, 0.01, size=(3, FEATURE_DIM))
    return ModelParams(weights=weights, bias=np.zeros(3), seed=seed)


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def predict_probs(params: ModelParams, features: np.ndarray) -> np.ndarray:
    params.check_finite()
    logits = features @ params.weights.T + params.bias
    return _softmax(logits)


def forward(params: ModelParams, img: GrayImage) -> np.ndarray:
    """Class probabilities for one image; always sums to 1."""
    return predict_probs(params, extract_features(img))


def loss_and_grad_on_features(
    params: ModelParams, features: np.ndarray, labels: np.ndarray
) -> tuple[float, Gradients]:
    """Mean cross-entropy and its exact gradient for a feature batch."""
    n = features.shape[0]
    probs = predict_probs(params, features)
    picked = probs[np.arange(n), labels]
    loss = float(-np.log(picked).mean())

    delta = probs.copy()
    delta[np.arange(n), labels] -= 1.0
    grad_w = delta.T @ features / n
    grad_b = delta.mean(axis=0)
    return loss, Gradients(weights=grad_w, bias=grad_b)


def loss_and_grad(
    params: ModelParams, batch: Sequence[tuple[GrayImage, ClassLabel]]
) -> tuple[float, Gradients]:
    if len(batch) == 0:
        raise errors.EmptyBatch("batch must contain at least one sample")
    features = np.stack([extract_features(img) for img, _ in batch])
    labels = np.array([int(label) for _, label in batch])
    return loss_and_grad_on_features(params, features, labels)


@dataclass
class TrainConfig:
    epochs: int = 30
    batch_size: int = 16
    learning_rate: float = 0.1
    seed: int = 0


@dataclass
class EpochStats:
    loss: float
    accuracy: float


def train(
    samples: Sequence[tuple[GrayImage, ClassLabel | None]],
    config: TrainConfig,
) -> tuple[ModelParams, list[EpochStats]]:
    """Seeded mini-batch gradient descent; deterministic for a fixed config."""
    if len(samples) == 0:
        raise errors.EmptyDataset("no training samples")
    for img, label in samples:
        if label is None:
            raise errors.UnlabeledSample(f"sample {img.id!r} has no label")

    features = np.stack([extract_features(img) for img, _ in samples])
    labels = np.array([int(label) for _, label in samples])
    n = len(samples)

    params = init_model(config.seed)
    rng = np.random.default_rng(config.seed)
    history: list[EpochStats] = []

    for _ in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            _, grads = loss_and_grad_on_features(params, features[idx], labels[idx])
            params.weights -= config.learning_rate * grads.weights
            params.bias -= config.learning_rate * grads.bias
        params.check_finite()

        probs = predict_probs(params, features)
        loss = float(-np.log(probs[np.arange(n), labels]).mean())
        accuracy = float((probs.argmax(axis=1) == labels).mean())
        history.append(EpochStats(loss=loss, accuracy=accuracy))

    return params, history


def save_model(params: ModelParams, path: str | Path) -> None:
    doc = {
        "seed": params.seed,
        "weights": params.weights.tolist(),
        "bias": params.bias.tolist(),
        "feature_spec": params.feature_spec,
    }
    Path(path).write_text(json.dumps(doc))


def load_model(path: str | Path) -> ModelParams:
    doc = json.loads(Path(path).read_text())
    params = ModelParams(
        weights=np.asarray(doc["weights"], dtype=np.float64),
        bias=np.asarray(doc["bias"], dtype=np.float64),
        feature_spec=doc.get("feature_spec", FEATURE_SPEC),
        seed=int(doc.get("seed", 0)),
    )
    params.check_finite()
    return params


# --- external predictions ----------------------------------------------------

class ExternalPredictionSet:
    """Per-(image, tile) probabilities produced by an outside model."""

    def __init__(self):
        self._entries: dict[tuple[str, int], np.ndarray] = {}

    def add(self, image_id: str, tile: int, probs: np.ndarray) -> None:
        key = (image_id, tile)
        if key in self._entries:
            raise errors.DuplicateKey(f"duplicate prediction for {key}")
        self._entries[key] = probs

    def get(self, image_id: str, tile: int) -> np.ndarray | None:
        return self._entries.get((image_id, tile))

    def tiles_for(self, image_id: str) -> dict[int, np.ndarray]:
        return {
            tile: probs
            for (img_id, tile), probs in self._entries.items()
            if img_id == image_id and tile != WHOLE_IMAGE
        }

    def whole_for(self, image_id: str) -> np.ndarray | None:
        return self._entries.get((image_id, WHOLE_IMAGE))

    def image_ids(self) -> list[str]:
        return sorted({img_id for img_id, _ in self._entries})

    def __len__(self) -> int:
        return len(self._entries)


def parse_prediction_lines(lines: Iterable[str]) -> ExternalPredictionSet:
    """Parse JSON Lines: {"image_id":…, "tile":…, "probs":[b,n,v]}."""
    out = ExternalPredictionSet()
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise errors.MalformedLine(f"line {lineno}: invalid JSON ({exc})") from None
        if not isinstance(obj, dict) or not {"image_id", "tile", "probs"} <= obj.keys():
            raise errors.MalformedLine(
                f"line {lineno}: need keys image_id, tile, probs"
            )
        image_id, tile = obj["image_id"], obj["tile"]
        if not isinstance(image_id, str) or not isinstance(tile, int) or tile < -1:
            raise errors.MalformedLine(f"line {lineno}: bad image_id or tile index")
        probs = validate_probs(obj["probs"], renormalize=True)
        out.add(image_id, tile, probs)
    return out


def load_external_predictions(path: str | Path) -> ExternalPredictionSet:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_prediction_lines(fh)
