"""
Dense softmax network with hand-derived backpropagation.

Layers: dense -> (relu | tanh) -> optional inverted dropout, repeated per
hidden layer, then dense -> softmax. Trained on mean cross-entropy with
mini-batch RMSprop. The penultimate activations are the learned features.
"""

from typing import Callable, Optional, Union

import numpy as np

from ..exceptions import ShapeError, TrainingDivergenceError
from ..models.dataset import ColoredDataset
from ..models.network import (
    FeatureMatrix,
    ForwardPass,
    GradientCheckResult,
    Network,
    NetworkConfig,
    TrainingResult,
)
from ...infrastructure.logging import CausalRepLogger

_INFERENCE_CHUNK = 4096


def init_network(config: NetworkConfig) -> Network:
    """Scaled-uniform weights (limit sqrt(6 / (fan_in + fan_out))), zero biases."""
    rng = np.random.default_rng(config.seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(config.layer_sizes[:-1], config.layer_sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return Network(config=config, weights=weights, biases=biases)


def to_inputs(images: np.ndarray) -> np.ndarray:
    """Flatten images to rows; integer pixel data is scaled to [0, 1]."""
    images = np.asarray(images)
    rows = images.reshape(images.shape[0], -1)
    if np.issubdtype(rows.dtype, np.integer):
        return rows.astype(np.float64) / 255.0
    return rows.astype(np.float64, copy=False)


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _activate(name: str, z: np.ndarray) -> np.ndarray:
    if name == "relu":
        return np.maximum(z, 0.0)
    return np.tanh(z)


def _activation_derivative(name: str, z: np.ndarray, a: np.ndarray) -> np.ndarray:
    if name == "relu":
        return (z > 0.0).astype(z.dtype)
    return 1.0 - a**2


def forward(
    net: Network,
    batch: np.ndarray,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> ForwardPass:
    """
    Run the network on a batch of flattened inputs.

    Dropout is applied only when ``training`` is set, with inverted scaling
    so inference needs no rescaling.
    """
    x = np.asarray(batch, dtype=np.float64)
    config = net.config
    if x.ndim != 2 or x.shape[1] != config.input_width:
        raise ShapeError(
            f"batch must be (n, {config.input_width}), got shape {x.shape}"
        )
    if training and rng is None:
        rng = np.random.default_rng(config.seed)

    pre_activations: list[np.ndarray] = []
    activations: list[np.ndarray] = [x]
    masks: list[Optional[np.ndarray]] = [None]

    a = x
    last = net.num_layers - 1
    for layer, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = a @ w + b
        pre_activations.append(z)
        if layer == last:
            break
        a = _activate(config.activations[layer], z)
        rate = config.dropout_rates[layer]
        mask = None
        if training and rate > 0.0:
            mask = (rng.random(a.shape) >= rate) / (1.0 - rate)
            a = a * mask
        activations.append(a)
        masks.append(mask)

    return ForwardPass(
        pre_activations=pre_activations,
        activations=activations,
        dropout_masks=masks,
        probabilities=softmax(pre_activations[-1]),
    )


def cross_entropy(probabilities: np.ndarray, labels: np.ndarray) -> float:
    """Mean negative log-probability of the true class."""
    picked = probabilities[np.arange(labels.shape[0]), labels]
    return float(-np.mean(np.log(np.maximum(picked, np.finfo(float).tiny))))


def backward(
    net: Network, fp: ForwardPass, labels: np.ndarray
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Gradients of the mean cross-entropy w.r.t. every weight and bias."""
    n = labels.shape[0]
    delta = fp.probabilities.copy()
    delta[np.arange(n), labels] -= 1.0
    delta /= n

    grad_w: list[np.ndarray] = [np.empty(0)] * net.num_layers
    grad_b: list[np.ndarray] = [np.empty(0)] * net.num_layers
    for layer in range(net.num_layers - 1, -1, -1):
        a_prev = fp.activations[layer]
        grad_w[layer] = a_prev.T @ delta
        grad_b[layer] = delta.sum(axis=0)
        if layer == 0:
            break
        upstream = delta @ net.weights[layer].T
        mask = fp.dropout_masks[layer]
        if mask is not None:
            upstream = upstream * mask
        z = fp.pre_activations[layer - 1]
        activated = _activate(net.config.activations[layer - 1], z)
        delta = upstream * _activation_derivative(
            net.config.activations[layer - 1], z, activated
        )
    return grad_w, grad_b


def loss_and_gradients(
    net: Network,
    inputs: np.ndarray,
    labels: np.ndarray,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
    fp = forward(net, inputs, training=training, rng=rng)
    grad_w, grad_b = backward(net, fp, labels)
    return cross_entropy(fp.probabilities, labels), grad_w, grad_b


def _rmsprop_step(net: Network, grad_w: list[np.ndarray], grad_b: list[np.ndarray]) -> None:
    config = net.config
    rho, eps, lr = config.rmsprop_decay, config.rmsprop_epsilon, config.learning_rate
    for layer in range(net.num_layers):
        for param, cache, grad in (
            (net.weights[layer], net.rms_weights[layer], grad_w[layer]),
            (net.biases[layer], net.rms_biases[layer], grad_b[layer]),
        ):
            cache *= rho
            cache += (1.0 - rho) * grad**2
            param -= lr * grad / (np.sqrt(cache) + eps)


def train_arrays(
    net: Network,
    inputs: np.ndarray,
    labels: np.ndarray,
    on_epoch: Optional[Callable[[int, float], None]] = None,
) -> TrainingResult:
    """
    Train ``net`` in place with mini-batch RMSprop.

    Batches come from a seeded per-epoch shuffle without replacement; the
    final short batch is kept. The loss trace holds the example-weighted
    mean batch loss of each epoch.

    Raises:
        ShapeError: If inputs and labels disagree
        TrainingDivergenceError: If a batch loss is not finite
    """
    logger = CausalRepLogger.get_instance()
    config = net.config
    x = np.asarray(inputs, dtype=np.float64)
    y = np.asarray(labels).astype(np.int64)
    if x.shape[0] == 0:
        raise ShapeError("cannot train on an empty dataset")
    if y.shape != (x.shape[0],):
        raise ShapeError(f"{x.shape[0]} inputs but labels of shape {y.shape}")
    if y.min() < 0 or y.max() >= config.num_classes:
        raise ShapeError(f"labels must lie in [0, {config.num_classes - 1}]")

    rng = np.random.default_rng([config.seed, 1])
    n = x.shape[0]
    loss_trace: list[float] = []

    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(n)
        total = 0.0
        for batch_index, start in enumerate(range(0, n, config.batch_size), start=1):
            idx = order[start:start + config.batch_size]
            loss, grad_w, grad_b = loss_and_gradients(
                net, x[idx], y[idx], training=True, rng=rng
            )
            if not np.isfinite(loss):
                raise TrainingDivergenceError(epoch, batch_index, loss)
            _rmsprop_step(net, grad_w, grad_b)
            total += loss * idx.size

        epoch_loss = total / n
        loss_trace.append(epoch_loss)
        logger.debug(
            "Epoch finished",
            extra={"epoch": epoch, "epochs": config.epochs, "mean_loss": round(epoch_loss, 6)},
        )
        if on_epoch is not None:
            on_epoch(epoch, epoch_loss)

    return TrainingResult(network=net, loss_trace=loss_trace)


def train(
    net: Network,
    data: ColoredDataset,
    config: Optional[NetworkConfig] = None,
    on_epoch: Optional[Callable[[int, float], None]] = None,
) -> TrainingResult:
    """
    Train on a colored dataset's images and binary labels.

    ``config`` replaces the network's training hyperparameters when given;
    its layer sizes must match the network.
    """
    if data.n == 0:
        raise ShapeError("cannot train on an empty dataset")
    if config is not None:
        if config.layer_sizes != net.config.layer_sizes:
            raise ShapeError(
                f"config layers {config.layer_sizes} do not match network "
                f"{net.config.layer_sizes}"
            )
        net.config = config
    return train_arrays(net, to_inputs(data.images), data.labels, on_epoch=on_epoch)


def _inference_rows(net: Network, images: Union[np.ndarray, FeatureMatrix]) -> np.ndarray:
    values = images.values if isinstance(images, FeatureMatrix) else images
    values = np.asarray(values)
    if values.ndim > 2 or np.issubdtype(values.dtype, np.integer):
        return to_inputs(values)
    return values.astype(np.float64, copy=False)


def predict_proba(net: Network, images: np.ndarray) -> np.ndarray:
    """Class probabilities in inference mode."""
    x = _inference_rows(net, images)
    chunks = [
        forward(net, x[i:i + _INFERENCE_CHUNK]).probabilities
        for i in range(0, x.shape[0], _INFERENCE_CHUNK)
    ]
    return np.concatenate(chunks) if chunks else np.empty((0, net.config.num_classes))


def predict_classes(net: Network, images: np.ndarray) -> np.ndarray:
    return np.argmax(predict_proba(net, images), axis=1)


def training_accuracy(net: Network, data: ColoredDataset) -> float:
    return float(np.mean(predict_classes(net, data.images) == data.labels))


def extract_features(net: Network, images: np.ndarray) -> FeatureMatrix:
    """
    Activations of the feature layer (the last hidden layer) in inference mode.

    ``images`` may be uint8 images of any shape (flattened and scaled) or
    already-flattened float rows.
    """
    x = _inference_rows(net, images)
    index = net.config.feature_layer_index
    chunks = [
        forward(net, x[i:i + _INFERENCE_CHUNK]).activations[index]
        for i in range(0, x.shape[0], _INFERENCE_CHUNK)
    ]
    values = np.concatenate(chunks) if chunks else np.empty((0, net.config.feature_width))
    return FeatureMatrix(values=values)


def gradient_check(
    net: Network,
    inputs: np.ndarray,
    labels: np.ndarray,
    tolerance: float = 1e-4,
    step: float = 1e-5,
    samples_per_parameter: int = 20,
    seed: int = 0,
) -> GradientCheckResult:
    """
    Compare backpropagation with central finite differences.

    Checks a random subset of entries of every weight matrix and bias
    vector in inference mode. Relative error is
    |analytic - numeric| / max(|analytic| + |numeric|, 1e-6).
    """
    x = np.asarray(inputs, dtype=np.float64)
    y = np.asarray(labels).astype(np.int64)
    if x.shape[0] > 10:
        raise ShapeError("gradient_check is meant for at most 10 examples")

    trial = net.copy()
    _, grad_w, grad_b = loss_and_gradients(trial, x, y)
    analytic = []
    for gw, gb in zip(grad_w, grad_b):
        analytic.extend((gw, gb))

    rng = np.random.default_rng(seed)
    worst = 0.0
    checked = 0
    for param, grad in zip(trial.parameters(), analytic):
        flat = param.reshape(-1)
        picks = rng.choice(flat.size, size=min(samples_per_parameter, flat.size), replace=False)
        for i in picks:
            original = flat[i]
            flat[i] = original + step
            plus = cross_entropy(forward(trial, x).probabilities, y)
            flat[i] = original - step
            minus = cross_entropy(forward(trial, x).probabilities, y)
            flat[i] = original
            numeric = (plus - minus) / (2.0 * step)
            exact = grad.reshape(-1)[i]
            error = abs(exact - numeric) / max(abs(exact) + abs(numeric), 1e-6)
            worst = max(worst, error)
            checked += 1

    return GradientCheckResult(
        max_relative_error=float(worst), parameters_checked=checked, tolerance=tolerance
    )
