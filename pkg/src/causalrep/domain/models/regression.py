"""Regression fit value objects."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class OlsFit:
    """
    Ordinary least squares fit.

    For a single response, coefficients/standard_errors are (p,) and
    residuals (n,); for a matrix of k responses they are (p, k) and (n, k).
    """
    coefficients: np.ndarray
    residuals: np.ndarray
    design_columns: tuple[str, ...]
    standard_errors: np.ndarray

    def coefficient(self, column: str) -> np.ndarray:
        """Coefficient(s) of a named design column."""
        return self.coefficients[self.design_columns.index(column)]


@dataclass(frozen=True)
class LogisticFit:
    """
    Binary logistic regression fit.

    weights[0] is the intercept, weights[1:] the slopes on the original
    feature scale.
    """
    weights: np.ndarray
    converged: bool
    iterations: int
    objective_trace: list[float] = field(default_factory=list)

    @property
    def n_features(self) -> int:
        return int(self.weights.shape[0] - 1)
