"""Neural network domain models."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..exceptions import NetworkConfigError

SUPPORTED_ACTIVATIONS = ("relu", "tanh")


@dataclass(frozen=True)
class NetworkConfig:
    """
    Architecture and training hyperparameters of the feature learner.

    layer_sizes runs from the input width to the number of classes. Hidden
    layer h (1-based) has activation ``activations[h-1]`` and dropout
    ``dropout_rates[h-1]``. ``feature_layer_index`` indexes the activation
    list (0 = input, h = output of hidden layer h) and must address the last
    hidden layer; for a net without hidden layers it addresses the input.
    """
    layer_sizes: tuple[int, ...]
    activations: tuple[str, ...] = ()
    dropout_rates: tuple[float, ...] = ()
    feature_layer_index: Optional[int] = None
    epochs: int = 10
    batch_size: int = 128
    learning_rate: float = 1e-3
    rmsprop_decay: float = 0.9
    rmsprop_epsilon: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.layer_sizes)
        object.__setattr__(self, "layer_sizes", sizes)
        hidden = len(sizes) - 2

        if len(sizes) < 2:
            raise NetworkConfigError("a network needs at least an input and an output layer")
        if any(s < 1 for s in sizes):
            raise NetworkConfigError(f"layer widths must be positive, got {sizes}")
        if sizes[-1] < 2:
            raise NetworkConfigError("the softmax layer needs at least 2 classes")

        if not self.activations:
            object.__setattr__(self, "activations", ("relu",) * hidden)
        if not self.dropout_rates:
            object.__setattr__(self, "dropout_rates", (0.0,) * hidden)
        object.__setattr__(self, "activations", tuple(self.activations))
        object.__setattr__(self, "dropout_rates", tuple(float(r) for r in self.dropout_rates))

        if len(self.activations) != hidden:
            raise NetworkConfigError(
                f"expected {hidden} hidden activations, got {len(self.activations)}"
            )
        unknown = [a for a in self.activations if a not in SUPPORTED_ACTIVATIONS]
        if unknown:
            raise NetworkConfigError(
                f"unsupported activations {unknown}; supported: {SUPPORTED_ACTIVATIONS}"
            )
        if len(self.dropout_rates) != hidden:
            raise NetworkConfigError(
                f"expected {hidden} dropout rates, got {len(self.dropout_rates)}"
            )
        if any(not 0.0 <= r < 1.0 for r in self.dropout_rates):
            raise NetworkConfigError(f"dropout rates must lie in [0, 1), got {self.dropout_rates}")

        if self.feature_layer_index is None:
            object.__setattr__(self, "feature_layer_index", hidden)
        if self.feature_layer_index != hidden:
            raise NetworkConfigError(
                f"feature_layer_index must address the last hidden layer ({hidden}), "
                f"got {self.feature_layer_index}"
            )

        if self.epochs < 1 or self.batch_size < 1:
            raise NetworkConfigError("epochs and batch_size must be positive")
        if self.learning_rate < 0:
            raise NetworkConfigError("learning_rate must be non-negative")
        if not 0.0 <= self.rmsprop_decay < 1.0:
            raise NetworkConfigError("rmsprop_decay must lie in [0, 1)")
        if self.rmsprop_epsilon <= 0:
            raise NetworkConfigError("rmsprop_epsilon must be positive")

    @property
    def input_width(self) -> int:
        return self.layer_sizes[0]

    @property
    def num_classes(self) -> int:
        return self.layer_sizes[-1]

    @property
    def feature_width(self) -> int:
        return self.layer_sizes[self.feature_layer_index]

    @classmethod
    def default_mlp(cls, input_width: int, **overrides) -> "NetworkConfig":
        """input -> 64 relu (dropout 0.25) -> 16 relu -> 2 softmax."""
        params = dict(
            layer_sizes=(input_width, 64, 16, 2),
            activations=("relu", "relu"),
            dropout_rates=(0.25, 0.0),
        )
        params.update(overrides)
        return cls(**params)


@dataclass
class Network:
    """
    Parameters of a dense softmax network plus its RMSprop state.

    weights[l] has shape (fan_in, fan_out); biases[l] has shape (fan_out,).
    """
    config: NetworkConfig
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    rms_weights: list[np.ndarray] = field(default_factory=list)
    rms_biases: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        if not self.rms_weights:
            self.rms_weights = [np.zeros_like(w) for w in self.weights]
        if not self.rms_biases:
            self.rms_biases = [np.zeros_like(b) for b in self.biases]

    @property
    def num_layers(self) -> int:
        """Number of weight layers."""
        return len(self.weights)

    def parameters(self) -> list[np.ndarray]:
        """Weights and biases in layer order (W0, b0, W1, b1, ...)."""
        params = []
        for w, b in zip(self.weights, self.biases):
            params.extend((w, b))
        return params

    def copy(self) -> "Network":
        return Network(
            config=self.config,
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            rms_weights=[v.copy() for v in self.rms_weights],
            rms_biases=[v.copy() for v in self.rms_biases],
        )


@dataclass(frozen=True)
class ForwardPass:
    """Pre-activations, activations and dropout masks of one forward pass."""
    pre_activations: list[np.ndarray]
    activations: list[np.ndarray]
    dropout_masks: list[Optional[np.ndarray]]
    probabilities: np.ndarray


@dataclass(frozen=True)
class FeatureMatrix:
    """Penultimate-layer activations, one row per example."""
    values: np.ndarray

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def k(self) -> int:
        return int(self.values.shape[1])


@dataclass(frozen=True)
class TrainingResult:
    """A trained network and its per-epoch mean training loss."""
    network: Network
    loss_trace: list[float]


@dataclass(frozen=True)
class GradientCheckResult:
    """Outcome of comparing backpropagation with central finite differences."""
    max_relative_error: float
    parameters_checked: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_relative_error <= self.tolerance
