"""Tests for the dense softmax network and its backpropagation."""

import numpy as np
import pytest

from causalrep.domain.exceptions import NetworkConfigError, ShapeError, TrainingDivergenceError
from causalrep.domain.models import NetworkConfig
from causalrep.domain.services.colorizer import colorize
from causalrep.domain.services.neural_network import (
    extract_features,
    forward,
    gradient_check,
    init_network,
    loss_and_gradients,
    predict_classes,
    train,
    train_arrays,
    training_accuracy,
)

pytestmark = pytest.mark.unit


def _small_net(seed: int, activation: str = "relu", widths=(6, 5, 4, 2)):
    config = NetworkConfig(
        layer_sizes=widths,
        activations=(activation,) * (len(widths) - 2),
        seed=seed,
    )
    net = init_network(config)
    rng = np.random.default_rng(seed + 1000)
    for b in net.biases:
        b[:] = rng.normal(0.0, 0.3, size=b.shape)
    return net


class TestConfig:

    def test_default_mlp_shapes(self):
        net = init_network(NetworkConfig.default_mlp(1568))
        assert [w.shape for w in net.weights] == [(1568, 64), (64, 16), (16, 2)]
        assert net.config.feature_width == 16
        assert all(not b.any() for b in net.biases)

    def test_single_layer_network(self):
        net = init_network(NetworkConfig(layer_sizes=(10, 2)))
        assert [w.shape for w in net.weights] == [(10, 2)]
        assert net.config.feature_layer_index == 0

    def test_same_seed_same_initial_weights(self):
        a = init_network(NetworkConfig(layer_sizes=(8, 4, 2), seed=3))
        b = init_network(NetworkConfig(layer_sizes=(8, 4, 2), seed=3))
        assert all(np.array_equal(x, y) for x, y in zip(a.weights, b.weights))

    def test_scaled_uniform_limits(self):
        net = init_network(NetworkConfig(layer_sizes=(100, 50, 2), seed=0))
        assert np.max(np.abs(net.weights[0])) <= np.sqrt(6.0 / 150)

    @pytest.mark.parametrize("kwargs", [
        dict(layer_sizes=(4,)),
        dict(layer_sizes=(4, 3, 1)),
        dict(layer_sizes=(4, 3, 2), activations=("sigmoid",)),
        dict(layer_sizes=(4, 3, 2), dropout_rates=(1.0,)),
        dict(layer_sizes=(4, 3, 2), feature_layer_index=0),
        dict(layer_sizes=(4, 3, 2), rmsprop_decay=1.0),
    ])
    def test_invalid_configs_are_rejected(self, kwargs):
        with pytest.raises(NetworkConfigError):
            NetworkConfig(**kwargs)


class TestForward:

    def test_softmax_rows_sum_to_one(self):
        net = _small_net(0)
        x = np.random.default_rng(0).normal(scale=10.0, size=(50, 6))
        p = forward(net, x).probabilities
        assert np.max(np.abs(p.sum(axis=1) - 1.0)) < 1e-12
        assert np.all((p > 0) & (p < 1))

    def test_zero_parameters_give_uniform_output(self):
        net = init_network(NetworkConfig(layer_sizes=(6, 5, 3)))
        for w in net.weights:
            w[:] = 0.0
        p = forward(net, np.random.default_rng(1).normal(size=(4, 6))).probabilities
        assert p == pytest.approx(np.full((4, 3), 1.0 / 3.0))

    def test_dropout_only_in_training_mode(self):
        config = NetworkConfig(layer_sizes=(6, 20, 2), dropout_rates=(0.5,), seed=2)
        net = init_network(config)
        x = np.random.default_rng(2).normal(size=(5, 6))

        first = forward(net, x).probabilities
        second = forward(net, x, rng=np.random.default_rng(99)).probabilities
        assert np.array_equal(first, second)

        dropped = forward(net, x, training=True, rng=np.random.default_rng(0))
        assert any(m is not None for m in dropped.dropout_masks)
        assert not np.array_equal(dropped.probabilities, first)

    def test_input_width_is_checked(self):
        with pytest.raises(ShapeError):
            forward(_small_net(0), np.zeros((3, 7)))


class TestTraining:

    def test_zero_learning_rate_leaves_parameters_unchanged(self):
        config = NetworkConfig(layer_sizes=(4, 6, 2), learning_rate=0.0, epochs=3, batch_size=8)
        net = init_network(config)
        before = [p.copy() for p in net.parameters()]
        x = np.random.default_rng(0).normal(size=(40, 4))
        y = (x[:, 0] > 0).astype(int)

        result = train_arrays(net, x, y)
        assert all(np.array_equal(a, b) for a, b in zip(before, net.parameters()))
        assert len(result.loss_trace) == 3
        assert np.ptp(result.loss_trace) < 1e-12

    def test_separable_blobs_are_learned(self):
        rng = np.random.default_rng(0)
        x = np.vstack([
            rng.normal(-2.0, 0.5, size=(100, 2)),
            rng.normal(2.0, 0.5, size=(100, 2)),
        ])
        y = np.repeat([0, 1], 100)
        config = NetworkConfig(
            layer_sizes=(2, 8, 2),
            activations=("tanh",),
            epochs=40,
            batch_size=20,
            learning_rate=0.01,
            seed=1,
        )
        net = init_network(config)
        result = train_arrays(net, x, y)

        assert np.mean(predict_classes(net, x) == y) == 1.0
        assert result.loss_trace[-1] < result.loss_trace[0]

    def test_colored_digits_reach_high_training_accuracy(self, raw_factory):
        data = colorize(raw_factory(200), 0.98, seed=0)
        height, width = data.image_shape
        config = NetworkConfig(
            layer_sizes=(2 * height * width, 16, 4, 2),
            activations=("tanh", "tanh"),
            epochs=30,
            batch_size=32,
            learning_rate=0.005,
            seed=0,
        )
        net = init_network(config)
        train(net, data)
        assert training_accuracy(net, data) > 0.95

    def test_divergence_reports_epoch_and_batch(self):
        net = init_network(NetworkConfig(layer_sizes=(3, 4, 2), batch_size=5))
        net.weights[0][:] = np.nan
        with pytest.raises(TrainingDivergenceError) as excinfo:
            train_arrays(net, np.ones((10, 3)), np.zeros(10, dtype=int))
        assert (excinfo.value.epoch, excinfo.value.batch) == (1, 1)

    def test_labels_must_fit_the_softmax(self):
        net = init_network(NetworkConfig(layer_sizes=(3, 2)))
        with pytest.raises(ShapeError):
            train_arrays(net, np.ones((4, 3)), np.array([0, 1, 2, 1]))

    def test_training_config_must_match_layers(self, raw_factory):
        data = colorize(raw_factory(20), 0.5, seed=0)
        net = init_network(NetworkConfig(layer_sizes=(128, 4, 2)))
        with pytest.raises(ShapeError):
            train(net, data, NetworkConfig(layer_sizes=(128, 8, 2)))


class TestFeatures:

    def test_default_feature_layer_has_sixteen_nonnegative_columns(self, raw_factory):
        data = colorize(raw_factory(30, size=28), 0.9, seed=0)
        net = init_network(NetworkConfig.default_mlp(2 * 28 * 28))
        features = extract_features(net, data.images)

        assert features.values.shape == (30, 16)
        assert np.all(features.values >= 0.0)

    def test_extraction_is_deterministic(self, raw_factory):
        data = colorize(raw_factory(10), 0.9, seed=0)
        net = init_network(NetworkConfig(layer_sizes=(128, 8, 4, 2), dropout_rates=(0.5, 0.0)))
        twice = np.concatenate([data.images[:1], data.images[:1]])

        rows = extract_features(net, twice).values
        assert np.array_equal(rows[0], rows[1])
        assert np.array_equal(extract_features(net, data.images).values,
                              extract_features(net, data.images).values)


class TestGradientCheck:

    @pytest.mark.parametrize("seed", range(20))
    @pytest.mark.parametrize("activation", ["relu", "tanh"])
    def test_backprop_matches_finite_differences(self, seed, activation):
        net = _small_net(seed, activation)
        rng = np.random.default_rng(seed)
        x = rng.normal(size=(5, 6))
        y = rng.integers(0, 2, size=5)

        result = gradient_check(net, x, y, seed=seed)
        assert result.passed, result.max_relative_error
        assert result.parameters_checked > 0

    def test_zero_input_batch(self):
        net = _small_net(3)
        result = gradient_check(net, np.zeros((4, 6)), np.array([0, 1, 1, 0]))
        assert np.isfinite(result.max_relative_error)
        assert result.passed

    def test_dead_unit_has_zero_incoming_gradient(self):
        net = _small_net(5)
        net.biases[0][2] = -100.0
        rng = np.random.default_rng(5)
        x = rng.normal(size=(6, 6))
        y = rng.integers(0, 2, size=6)

        _, grad_w, grad_b = loss_and_gradients(net, x, y)
        assert not grad_w[0][:, 2].any()
        assert grad_b[0][2] == 0.0
        assert gradient_check(net, x, y, samples_per_parameter=30).passed

    def test_batch_size_limit(self):
        with pytest.raises(ShapeError):
            gradient_check(_small_net(0), np.zeros((11, 6)), np.zeros(11, dtype=int))
