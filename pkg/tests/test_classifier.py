import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pneumoscreen import classifier, errors
from pneumoscreen.classifier import ClassLabel, ModelParams, TrainConfig
from pneumoscreen.gradcheck import run_gradient_check
from conftest import gray


def zero_params() -> ModelParams:
    return ModelParams(weights=np.zeros((3, classifier.FEATURE_DIM)), bias=np.zeros(3))


class TestFeatures:
    def test_black_image(self):
        feats = classifier.extract_features(gray(np.zeros((32, 32))))
        assert feats.shape == (1026,)
        assert np.all(feats == 0.0)

    def test_white_image(self):
        feats = classifier.extract_features(gray(np.full((48, 48), 255)))
        assert np.all(feats[:1024] == 1.0)
        assert feats[1024] == 1.0 and feats[1025] == 0.0

    def test_checkerboard_mean_and_std(self):
        board = np.indices((32, 32)).sum(axis=0) % 2 * 255
        feats = classifier.extract_features(gray(board))
        assert feats[1024] == pytest.approx(0.5, abs=1e-6)
        assert feats[1025] == pytest.approx(0.5, abs=1e-6)


class TestInitModel:
    def test_same_seed_bit_identical(self):
        a, b = classifier.init_model(42), classifier.init_model(42)
        assert np.array_equal(a.weights, b.weights)
        assert np.array_equal(a.bias, b.bias)

    def test_bias_starts_at_zero(self):
        assert classifier.init_model(7).bias.tolist() == [0.0, 0.0, 0.0]

    def test_weights_within_init_range(self):
        params = classifier.init_model(3)
        assert np.all(np.abs(params.weights) <= 0.01)

    def test_different_seeds_differ(self):
        assert not np.array_equal(
            classifier.init_model(1).weights, classifier.init_model(2).weights
        )


class TestForward:
    def test_zero_params_uniform(self, rng):
        img = gray(rng.integers(0, 256, size=(40, 40)))
        probs = classifier.forward(zero_params(), img)
        assert probs == pytest.approx([1 / 3] * 3, abs=1e-12)

    def test_bias_log_two_closed_form(self, rng):
        params = zero_params()
        params.bias = np.array([math.log(2.0), 0.0, 0.0])
        probs = classifier.forward(params, gray(rng.integers(0, 256, size=(10, 10))))
        assert probs == pytest.approx([0.5, 0.25, 0.25], abs=1e-12)

    def test_sums_to_one(self, rng):
        params = classifier.init_model(0)
        for _ in range(5):
            img = gray(rng.integers(0, 256, size=(20, 30)))
            probs = classifier.forward(params, img)
            assert abs(probs.sum() - 1.0) <= 1e-9
            assert np.all(probs >= 0)

    def test_logit_shift_invariance(self, rng):
        img = gray(rng.integers(0, 256, size=(16, 16)))
        params = classifier.init_model(5)
        shifted = params.copy()
        shifted.bias = shifted.bias + 123.456
        base = classifier.forward(params, img)
        moved = classifier.forward(shifted, img)
        assert moved == pytest.approx(base, abs=1e-12)

    def test_nonfinite_params_rejected(self, rng):
        params = zero_params()
        params.weights[0, 0] = np.nan
        with pytest.raises(errors.NonFiniteParams):
            classifier.forward(params, gray(np.zeros((8, 8))))


class TestLossAndGrad:
    def test_zero_params_loss_is_log_three(self, rng):
        batch = [
            (gray(rng.integers(0, 256, size=(12, 12))), ClassLabel(int(k % 3)))
            for k in range(6)
        ]
        loss, _ = classifier.loss_and_grad(zero_params(), batch)
        assert loss == pytest.approx(math.log(3.0), abs=1e-12)

    def test_confident_correct_prediction_loss_vanishes(self, rng):
        params = zero_params()
        params.bias = np.array([50.0, 0.0, 0.0])
        batch = [(gray(np.zeros((8, 8))), ClassLabel.BACTERIA)]
        loss, _ = classifier.loss_and_grad(params, batch)
        assert loss < 1e-12

    def test_empty_batch_rejected(self):
        with pytest.raises(errors.EmptyBatch):
            classifier.loss_and_grad(zero_params(), [])

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_gradient_matches_finite_differences(self, seed):
        report = run_gradient_check(seed=seed, draws=1, coords=20, step=1e-5)
        assert report["ok"], report

    def test_gradient_shapes_match_params(self, rng):
        batch = [(gray(rng.integers(0, 256, size=(9, 9))), ClassLabel.VIRUS)]
        _, grads = classifier.loss_and_grad(classifier.init_model(0), batch)
        assert grads.weights.shape == (3, classifier.FEATURE_DIM)
        assert grads.bias.shape == (3,)


def _tiny_dataset(tmp_path, per_class=12, seed=3):
    from pneumoscreen.evaluation import generate_fixture
    from pneumoscreen.images import load_image

    manifest = generate_fixture(tmp_path / "data", per_class=per_class, seed=seed)
    train = [
        (load_image(manifest.resolve(e)), e.label) for e in manifest.split("train")
    ]
    test = [(load_image(manifest.resolve(e)), e.label) for e in manifest.split("test")]
    return train, test


class TestTrain:
    def test_zero_epochs_returns_init(self, tmp_path):
        train_set, _ = _tiny_dataset(tmp_path, per_class=4)
        params, history = classifier.train(train_set, TrainConfig(epochs=0, seed=11))
        init = classifier.init_model(11)
        assert np.array_equal(params.weights, init.weights)
        assert np.array_equal(params.bias, init.bias)
        assert history == []

    def test_deterministic_history(self, tmp_path):
        train_set, _ = _tiny_dataset(tmp_path, per_class=6)
        config = TrainConfig(epochs=5, seed=2)
        params_a, hist_a = classifier.train(train_set, config)
        params_b, hist_b = classifier.train(train_set, config)
        assert hist_a == hist_b
        assert np.array_equal(params_a.weights, params_b.weights)

    def test_separable_fixture_reaches_high_train_accuracy(self, tmp_path):
        train_set, _ = _tiny_dataset(tmp_path, per_class=12)
        params, history = classifier.train(
            train_set, TrainConfig(epochs=30, learning_rate=0.1, seed=0)
        )
        assert history[-1].accuracy >= 0.99

    def test_loss_drops_during_first_epoch_on_fixture(self, tmp_path):
        train_set, _ = _tiny_dataset(tmp_path, per_class=8)
        initial_loss, _ = classifier.loss_and_grad(classifier.init_model(0), train_set)
        _, history = classifier.train(train_set, TrainConfig(epochs=1, seed=0))
        assert history[0].loss < initial_loss

    def test_unlabeled_sample_rejected(self, tmp_path):
        train_set, _ = _tiny_dataset(tmp_path, per_class=2)
        train_set.append((train_set[0][0], None))
        with pytest.raises(errors.UnlabeledSample):
            classifier.train(train_set, TrainConfig(epochs=1))

    def test_empty_dataset_rejected(self):
        with pytest.raises(errors.EmptyDataset):
            classifier.train([], TrainConfig())

    def test_history_losses_finite(self, tmp_path):
        train_set, _ = _tiny_dataset(tmp_path, per_class=4)
        _, history = classifier.train(train_set, TrainConfig(epochs=3))
        assert all(math.isfinite(h.loss) for h in history)


class TestModelPersistence:
    def test_round_trip(self, tmp_path):
        params, _ = (classifier.init_model(9), None)
        params.weights[0, 0] = 0.123456789
        path = tmp_path / "model.json"
        classifier.save_model(params, path)
        loaded = classifier.load_model(path)
        assert np.array_equal(loaded.weights, params.weights)
        assert np.array_equal(loaded.bias, params.bias)
        assert loaded.feature_spec == classifier.FEATURE_SPEC
        assert loaded.seed == 9

    def test_document_schema(self, tmp_path):
        path = tmp_path / "model.json"
        classifier.save_model(classifier.init_model(1), path)
        doc = json.loads(path.read_text())
        assert set(doc) == {"seed", "weights", "bias", "feature_spec"}


class TestExternalPredictions:
    def test_entry_stored(self):
        preds = classifier.parse_prediction_lines(
            ['{"image_id": "a", "tile": 0, "probs": [0.2, 0.3, 0.5]}']
        )
        assert preds.get("a", 0) == pytest.approx([0.2, 0.3, 0.5])

    def test_overweight_distribution_rejected(self):
        with pytest.raises(errors.BadDistribution):
            classifier.parse_prediction_lines(
                ['{"image_id": "a", "tile": 0, "probs": [0.5, 0.5, 0.5]}']
            )

    def test_duplicate_key_rejected(self):
        line = '{"image_id": "a", "tile": 1, "probs": [1.0, 0.0, 0.0]}'
        with pytest.raises(errors.DuplicateKey):
            classifier.parse_prediction_lines([line, line])

    def test_tiny_drift_renormalized(self):
        preds = classifier.parse_prediction_lines(
            ['{"image_id": "a", "tile": 0, "probs": [0.2, 0.3000000004, 0.5]}']
        )
        assert preds.get("a", 0).sum() == pytest.approx(1.0, abs=1e-15)

    def test_drift_beyond_tolerance_rejected(self):
        with pytest.raises(errors.BadDistribution):
            classifier.parse_prediction_lines(
                ['{"image_id": "a", "tile": 0, "probs": [0.2, 0.300002, 0.5]}']
            )

    @pytest.mark.parametrize(
        "line",
        [
            "not json",
            '{"image_id": "a", "probs": [1, 0, 0]}',
            '{"image_id": "a", "tile": -2, "probs": [1, 0, 0]}',
            '{"image_id": 3, "tile": 0, "probs": [1, 0, 0]}',
        ],
    )
    def test_malformed_lines_rejected(self, line):
        with pytest.raises(errors.MalformedLine):
            classifier.parse_prediction_lines([line])

    def test_negative_probability_rejected(self):
        with pytest.raises(errors.BadDistribution):
            classifier.parse_prediction_lines(
                ['{"image_id": "a", "tile": 0, "probs": [1.2, -0.2, 0.0]}']
            )

    def test_whole_image_and_tiles_coexist(self, tmp_path):
        path = tmp_path / "preds.jsonl"
        path.write_text(
            '{"image_id": "x", "tile": -1, "probs": [0.1, 0.8, 0.1]}\n'
            '{"image_id": "x", "tile": 0, "probs": [0.9, 0.05, 0.05]}\n'
        )
        preds = classifier.load_external_predictions(path)
        assert preds.whole_for("x") is not None
        assert list(preds.tiles_for("x")) == [0]
        assert preds.image_ids() == ["x"]


class TestProbValidation:
    @given(st.lists(st.floats(0.001, 1.0), min_size=3, max_size=3))
    @settings(max_examples=50, deadline=None)
    def test_normalized_vectors_always_accepted(self, raw):
        vec = np.array(raw) / np.array(raw).sum()
        out = classifier.validate_probs(vec, renormalize=True)
        assert abs(out.sum() - 1.0) <= 1e-9

    def test_shape_enforced(self):
        with pytest.raises(errors.BadDistribution):
            classifier.validate_probs([0.5, 0.5])
