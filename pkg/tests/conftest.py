import json

import numpy as np
import pytest

from pneumoscreen.images import GrayImage


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def gray(arr, image_id="img") -> GrayImage:
    return GrayImage.from_array(np.asarray(arr, dtype=np.uint8), image_id)


def prediction_lines(image_id: str, tile_probs, whole=None) -> str:
    """Build a JSON Lines predictions document for one image."""
    lines = [
        json.dumps({"image_id": image_id, "tile": index, "probs": list(map(float, probs))})
        for index, probs in enumerate(tile_probs)
    ]
    if whole is not None:
        lines.append(
            json.dumps({"image_id": image_id, "tile": -1, "probs": list(map(float, whole))})
        )
    return "\n".join(lines) + "\n"


@pytest.fixture(scope="session")
def fixture_dataset(tmp_path_factory):
    """Shared synthetic dataset: 64 images per class, fixed seed."""
    from pneumoscreen.evaluation import generate_fixture

    out = tmp_path_factory.mktemp("fixture64")
    manifest = generate_fixture(out, per_class=64, seed=7)
    return manifest
