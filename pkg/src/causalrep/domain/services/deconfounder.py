"""
Causality-aware counterfactual features.

Each learned feature X_j is regressed on [1, Y, C_1..C_m] in the training
set; the estimated confounder contribution is subtracted from the training
features and, with the same training coefficients, from the test features.
Test labels are never used.
"""

from typing import Optional, Sequence, Union

import numpy as np

from ..exceptions import InvalidParameterError, ShapeError
from ..models.deconfounding import CounterfactualFeatures, DeconfoundFit
from ..models.network import FeatureMatrix
from .statistics import RANK_TOLERANCE, factorize_design

ArrayLike = Union[np.ndarray, FeatureMatrix]


def _matrix(features: ArrayLike) -> np.ndarray:
    values = features.values if isinstance(features, FeatureMatrix) else features
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise ShapeError(f"features must be an n x k matrix, got shape {values.shape}")
    return values


def _confounder_matrix(confounders: np.ndarray, n: int) -> np.ndarray:
    c = np.asarray(confounders, dtype=float)
    if c.ndim == 1:
        c = c[:, None]
    if c.ndim != 2 or c.shape[0] != n:
        raise ShapeError(
            f"confounders must have {n} rows, got shape {np.shape(confounders)}"
        )
    return c


def encode_confounders(
    values: np.ndarray,
    levels: Optional[Sequence] = None,
    name: str = "C",
) -> tuple[np.ndarray, tuple[str, ...]]:
    """
    Dummy-encode one confounder.

    Binary 0/1 values become a single column; a categorical confounder with
    L levels becomes L-1 indicator columns with the first level as reference.
    """
    values = np.asarray(values)
    if levels is None:
        levels = sorted(np.unique(values).tolist())
    levels = list(levels)
    unknown = set(np.unique(values).tolist()) - set(levels)
    if unknown:
        raise InvalidParameterError(
            f"confounder values {sorted(unknown)} are not among levels {levels}"
        )
    if len(levels) < 2:
        raise InvalidParameterError(f"confounder '{name}' needs at least two levels")

    if levels == [0, 1]:
        return values.astype(float)[:, None], (name,)

    columns = [(values == level).astype(float) for level in levels[1:]]
    names = tuple(f"{name}[{level}]" for level in levels[1:])
    return np.column_stack(columns), names


def fit_and_adjust_train(
    x_train: ArrayLike,
    y_train: np.ndarray,
    c_train: np.ndarray,
    confounder_names: Optional[Sequence[str]] = None,
    tolerance: float = RANK_TOLERANCE,
) -> tuple[CounterfactualFeatures, DeconfoundFit]:
    """
    Fit X_j ~ 1 + Y + C on the training set and subtract the C terms.

    One QR factorization of the shared design serves all k features.

    Returns:
        Counterfactual training features and the fit to reuse at test time

    Raises:
        ShapeError: On mismatched shapes or too few examples (n <= m + 2)
        SingularDesignError: If the design is rank deficient, e.g. when C is
            determined by Y in the training sample
    """
    x = _matrix(x_train)
    n = x.shape[0]
    y = np.asarray(y_train, dtype=float)
    if y.shape != (n,):
        raise ShapeError(f"{n} feature rows but labels of shape {y.shape}")
    c = _confounder_matrix(c_train, n)
    m = c.shape[1]
    if n <= m + 2:
        raise ShapeError(f"need more than {m + 2} training examples, got {n}")

    names = tuple(confounder_names) if confounder_names else tuple(
        "C" if m == 1 else f"C{i + 1}" for i in range(m)
    )
    if len(names) != m:
        raise ShapeError(f"{len(names)} confounder names for {m} confounder columns")

    design = np.column_stack([np.ones(n), y, c])
    qr = factorize_design(design, ("intercept", "Y") + names, tolerance=tolerance)
    fit = qr.solve(x)

    confounder_coefs = fit.coefficients[2:].T  # (k, m)
    deconfound_fit = DeconfoundFit(
        intercepts=fit.coefficients[0].copy(),
        label_coefs=fit.coefficients[1].copy(),
        confounder_coefs=confounder_coefs.copy(),
        confounder_names=names,
        train_residuals=fit.residuals,
    )
    adjusted = x - c @ confounder_coefs.T
    return CounterfactualFeatures(values=adjusted, source_fit=deconfound_fit), deconfound_fit


def adjust_test(
    x_test: ArrayLike, c_test: np.ndarray, fit: DeconfoundFit
) -> CounterfactualFeatures:
    """X*_j = X_j - sum_i beta_hat_{X_j C_i} C_i using training coefficients."""
    x = _matrix(x_test)
    if x.shape[1] != fit.k:
        raise ShapeError(f"test features have {x.shape[1]} columns, fit has {fit.k}")
    c = _confounder_matrix(c_test, x.shape[0])
    if c.shape[1] != fit.m:
        raise ShapeError(f"test confounders have {c.shape[1]} columns, fit has {fit.m}")
    return CounterfactualFeatures(values=x - c @ fit.confounder_coefs.T, source_fit=fit)


def reconstruct_train(fit: DeconfoundFit, y_train: np.ndarray) -> np.ndarray:
    """mu_hat + beta_hat_Y * Y + W_hat, the second form of the training adjustment."""
    if fit.train_residuals is None:
        raise InvalidParameterError("fit carries no training residuals")
    y = np.asarray(y_train, dtype=float)
    return fit.intercepts + np.outer(y, fit.label_coefs) + fit.train_residuals
