"""Counterfactual feature models."""

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class DeconfoundFit:
    """
    Per-feature training-set regressions X_j ~ 1 + Y + C_1 + ... + C_m.

    intercepts and label_coefs are (k,); confounder_coefs is (k, m).
    train_residuals keeps the training residuals W_j when the fit was
    produced in-process (it is not serialized).
    """
    intercepts: np.ndarray
    label_coefs: np.ndarray
    confounder_coefs: np.ndarray
    confounder_names: tuple[str, ...]
    train_residuals: Optional[np.ndarray] = None

    @property
    def k(self) -> int:
        return int(self.intercepts.shape[0])

    @property
    def m(self) -> int:
        return int(self.confounder_coefs.shape[1])


@dataclass(frozen=True)
class CounterfactualFeatures:
    """Deconfounded features X* together with the fit that produced them."""
    values: np.ndarray
    source_fit: DeconfoundFit

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def k(self) -> int:
        return int(self.values.shape[1])
