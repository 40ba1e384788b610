"""Experiment result models."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
import pandas as pd

from ..exceptions import InvalidParameterError
from .balance import BalanceConfig
from .dataset import ShiftLevel
from .diagnostics import CIReport
from .network import NetworkConfig


class Method(str, Enum):
    """The three ways of building the classifier."""
    NONE = "none"
    SMOTE = "smote"
    CAUSAL = "causal"


@dataclass(frozen=True)
class ResultRow:
    """Accuracy and CI report of one (replication, shift, method) cell."""
    replication: int
    shift: ShiftLevel
    method: Method
    accuracy: float
    ci_report: CIReport


@dataclass(frozen=True)
class PredictionRecord:
    """Test-set predicted probabilities of one (replication, shift, method) cell."""
    replication: int
    shift: ShiftLevel
    method: Method
    r_hat: np.ndarray
    colors: np.ndarray
    labels: np.ndarray


@dataclass(frozen=True)
class ReplicationFailure:
    """A replication that was skipped because one of its steps failed."""
    replication: int
    step: str
    error: str


@dataclass(frozen=True)
class ReplicationOutcome:
    """Rows (and optionally predictions) produced by one replication."""
    replication: int
    rows: list[ResultRow]
    predictions: list[PredictionRecord] = field(default_factory=list)


@dataclass
class ExperimentResult:
    """All replications of the shift experiment, ordered by replication index."""
    rows: list[ResultRow] = field(default_factory=list)
    failures: list[ReplicationFailure] = field(default_factory=list)
    predictions: list[PredictionRecord] = field(default_factory=list)
    summary: Optional[pd.DataFrame] = None

    def add_outcome(self, outcome: ReplicationOutcome) -> None:
        self.rows.extend(outcome.rows)
        self.predictions.extend(outcome.predictions)

    def add_failure(self, failure: ReplicationFailure) -> None:
        self.failures.append(failure)

    @property
    def replications(self) -> list[int]:
        return sorted({row.replication for row in self.rows})

    def accuracies(self, shift: ShiftLevel, method: Method) -> np.ndarray:
        return np.array(
            [r.accuracy for r in self.rows if r.shift is shift and r.method is method]
        )


@dataclass(frozen=True)
class LogisticOptions:
    """Settings of the logistic head fitted on (counterfactual) features."""
    max_iter: int = 5000
    tolerance: float = 1e-6
    l2_penalty: float = 1e-4
    threshold: float = 0.5


@dataclass(frozen=True)
class DiagnosticThresholds:
    """Magnitude cutoffs used to read correlations as (in)dependence."""
    independence: float = 0.1
    dependence: float = 0.2


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything one run of the shift experiment needs.

    ``network`` carries the hidden architecture and training settings; its
    input width is re-derived from the loaded images.
    """
    network: NetworkConfig
    balance: BalanceConfig = field(default_factory=BalanceConfig)
    logistic: LogisticOptions = field(default_factory=LogisticOptions)
    thresholds: DiagnosticThresholds = field(default_factory=DiagnosticThresholds)
    replications: int = 10
    base_seed: int = 0
    seed_stride: int = 1000
    n_train: Optional[int] = 12000
    n_test: Optional[int] = 2000
    downscale: bool = False
    min_singular_value: float = 1e-8
    workers: int = 1
    save_predictions: bool = False

    def __post_init__(self):
        if self.replications < 1:
            raise InvalidParameterError("replications must be at least 1")
        if self.workers < 1:
            raise InvalidParameterError("workers must be at least 1")

    def replication_seed(self, replication: int) -> int:
        return self.base_seed + replication * self.seed_stride


@dataclass(frozen=True)
class AcceptanceCheck:
    """One behavioral property of a finished experiment."""
    name: str
    passed: bool
    detail: str
