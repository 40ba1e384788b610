"""Domain models - Entities and Value Objects."""

from .dataset import (
    GREEN,
    RED,
    ColoredDataset,
    RawMnist,
    ShiftLevel,
    ShiftSuite,
    SynthScmDataset,
)
from .network import (
    FeatureMatrix,
    ForwardPass,
    GradientCheckResult,
    Network,
    NetworkConfig,
    TrainingResult,
)
from .regression import LogisticFit, OlsFit
from .deconfounding import CounterfactualFeatures, DeconfoundFit
from .balance import BalanceConfig
from .diagnostics import CIReport, RelationVerdict
from .experiment import (
    AcceptanceCheck,
    DiagnosticThresholds,
    ExperimentConfig,
    ExperimentResult,
    LogisticOptions,
    Method,
    PredictionRecord,
    ReplicationFailure,
    ReplicationOutcome,
    ResultRow,
)

__all__ = [
    "GREEN",
    "RED",
    "ColoredDataset",
    "RawMnist",
    "ShiftLevel",
    "ShiftSuite",
    "SynthScmDataset",
    "FeatureMatrix",
    "ForwardPass",
    "GradientCheckResult",
    "Network",
    "NetworkConfig",
    "TrainingResult",
    "LogisticFit",
    "OlsFit",
    "CounterfactualFeatures",
    "DeconfoundFit",
    "BalanceConfig",
    "CIReport",
    "RelationVerdict",
    "AcceptanceCheck",
    "DiagnosticThresholds",
    "ExperimentConfig",
    "ExperimentResult",
    "LogisticOptions",
    "Method",
    "PredictionRecord",
    "ReplicationFailure",
    "ReplicationOutcome",
    "ResultRow",
]
