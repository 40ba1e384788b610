"""
Shared numerical statistics.

Ordinary least squares through a QR factorization, binary logistic
regression by gradient ascent with backtracking, and Pearson / partial
correlations. Every function here is pure.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import linalg
from scipy.special import expit

from ..exceptions import (
    CollinearityError,
    DegenerateLabelsError,
    DegenerateVarianceError,
    InvalidParameterError,
    ShapeError,
    SingularDesignError,
    StatisticsError,
)
from ..models.regression import LogisticFit, OlsFit

# Smallest admissible |R_jj| of the column-normalized design.
RANK_TOLERANCE = 1e-8

_PROBABILITY_FLOOR = np.finfo(float).tiny
_PROBABILITY_CEIL = 1.0 - 2.0**-53


@dataclass(frozen=True)
class QrDesign:
    """
    A column-normalized, QR-factorized design matrix.

    Factorize once and solve any number of responses against it.
    """
    design: np.ndarray
    columns: tuple[str, ...]
    q: np.ndarray
    r: np.ndarray
    scale: np.ndarray

    @property
    def n(self) -> int:
        return int(self.design.shape[0])

    @property
    def p(self) -> int:
        return int(self.design.shape[1])

    def solve(self, response: np.ndarray) -> OlsFit:
        """Least-squares fit of ``response`` (n,) or (n, k) on the design."""
        response = np.asarray(response, dtype=float)
        if response.shape[0] != self.n:
            raise ShapeError(
                f"response has {response.shape[0]} rows but the design has {self.n}"
            )

        scaled = linalg.solve_triangular(self.r, self.q.T @ response)
        if scaled.ndim == 1:
            coefficients = scaled / self.scale
        else:
            coefficients = scaled / self.scale[:, None]
        residuals = response - self.design @ coefficients

        dof = self.n - self.p
        rss = np.sum(residuals**2, axis=0)
        sigma2 = rss / dof
        # diag((X'X)^-1) for the unscaled design
        r_inv = linalg.solve_triangular(self.r, np.eye(self.p))
        xtx_inv_diag = np.sum(r_inv**2, axis=1) / self.scale**2
        if np.ndim(sigma2) == 0:
            standard_errors = np.sqrt(sigma2 * xtx_inv_diag)
        else:
            standard_errors = np.sqrt(np.outer(xtx_inv_diag, sigma2))

        return OlsFit(
            coefficients=coefficients,
            residuals=residuals,
            design_columns=self.columns,
            standard_errors=standard_errors,
        )


def factorize_design(
    design: np.ndarray,
    columns: Optional[Sequence[str]] = None,
    tolerance: float = RANK_TOLERANCE,
) -> QrDesign:
    """
    Factorize a design matrix after checking it has full column rank.

    Columns are scaled to unit norm first; column j is rejected when its
    component orthogonal to columns 0..j-1 has relative norm below
    ``tolerance`` (|R_jj| of the normalized design).

    Raises:
        ShapeError: If the design is not 2-D or has too few rows
        SingularDesignError: Naming the first collinear column
    """
    design = np.asarray(design, dtype=float)
    if design.ndim != 2:
        raise ShapeError(f"design must be a 2-D matrix, got shape {design.shape}")
    n, p = design.shape
    names = tuple(columns) if columns is not None else tuple(f"x{j}" for j in range(p))
    if len(names) != p:
        raise ShapeError(f"{len(names)} column names for {p} design columns")
    if n <= p:
        raise ShapeError(f"need more rows than columns, got n={n}, p={p}")

    scale = np.linalg.norm(design, axis=0)
    for j, norm in enumerate(scale):
        if norm == 0.0:
            raise SingularDesignError(names[j], "column is identically zero")

    q, r = linalg.qr(design / scale, mode="economic")
    diagonal = np.abs(np.diag(r))
    for j, value in enumerate(diagonal):
        if value < tolerance:
            raise SingularDesignError(names[j], f"|R_jj|={value:.3g} < {tolerance:g}")

    return QrDesign(design=design, columns=names, q=q, r=r, scale=scale)


def ols_fit(
    response: np.ndarray,
    design: np.ndarray,
    columns: Optional[Sequence[str]] = None,
) -> OlsFit:
    """
    Ordinary least squares by QR decomposition.

    Args:
        response: n-vector (or n x k matrix of responses)
        design: n x p design matrix, intercept column included by the caller
        columns: Optional design column names (default x0..x{p-1})

    Returns:
        OlsFit with coefficients, residuals and classical standard errors
    """
    return factorize_design(design, columns).solve(response)


def _penalized_objective(
    w: np.ndarray, x1: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray]:
    """Mean Bernoulli log-likelihood minus (l2/2)||slopes||^2, and its gradient."""
    eta = x1 @ w
    # log p = -log(1 + e^-eta), log(1 - p) = -log(1 + e^eta)
    loglik = np.mean(y * -np.logaddexp(0.0, -eta) + (1.0 - y) * -np.logaddexp(0.0, eta))
    slopes = w.copy()
    slopes[0] = 0.0
    value = loglik - 0.5 * l2 * float(slopes @ slopes)
    gradient = x1.T @ (y - expit(eta)) / x1.shape[0] - l2 * slopes
    return float(value), gradient


def logistic_fit(
    features: np.ndarray,
    labels: np.ndarray,
    max_iter: int = 5000,
    tolerance: float = 1e-6,
    l2_penalty: float = 1e-4,
) -> LogisticFit:
    """
    Fit a binary logistic regression by gradient ascent with backtracking.

    Features are standardized internally; the penalty applies to the
    standardized slopes (never the intercept) and the returned weights are
    mapped back to the original feature scale. Each iteration starts from
    a Barzilai-Borwein step and halves it until the Armijo condition holds,
    so the penalized log-likelihood never decreases.

    Raises:
        ShapeError: On mismatched inputs
        DegenerateLabelsError: If labels contain a single class
    """
    x = np.asarray(features, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    y = np.asarray(labels, dtype=float)
    if x.shape[0] == 0:
        raise ShapeError("logistic_fit needs at least one example")
    if y.shape != (x.shape[0],):
        raise ShapeError(f"{x.shape[0]} feature rows but labels of shape {y.shape}")
    if not np.all((y == 0) | (y == 1)):
        raise StatisticsError("labels must be binary 0/1")
    if np.all(y == y[0]):
        raise DegenerateLabelsError(f"all labels equal {int(y[0])}; need both classes")

    center = x.mean(axis=0)
    spread = x.std(axis=0)
    spread[spread == 0.0] = 1.0
    x1 = np.column_stack([np.ones(x.shape[0]), (x - center) / spread])

    w = np.zeros(x1.shape[1])
    value, gradient = _penalized_objective(w, x1, y, l2_penalty)
    trace = [value]
    step = 1.0
    converged = False
    iterations = 0

    for iterations in range(1, max_iter + 1):
        if np.max(np.abs(gradient)) < tolerance:
            converged = True
            iterations -= 1
            break

        g_norm2 = float(gradient @ gradient)
        while True:
            candidate = w + step * gradient
            new_value, new_gradient = _penalized_objective(candidate, x1, y, l2_penalty)
            if new_value >= value + 1e-4 * step * g_norm2:
                break
            step *= 0.5
            if step < 1e-16:
                break

        if new_value < value:
            # no ascent direction left at machine precision
            converged = np.max(np.abs(gradient)) < tolerance
            break

        s = candidate - w
        r = gradient - new_gradient
        w, value, gradient = candidate, new_value, new_gradient
        trace.append(value)

        curvature = float(s @ r)
        step = float(s @ s) / curvature if curvature > 0 else step * 2.0
    else:
        converged = bool(np.max(np.abs(gradient)) < tolerance)

    slopes = w[1:] / spread
    intercept = w[0] - float(slopes @ center)
    return LogisticFit(
        weights=np.concatenate([[intercept], slopes]),
        converged=bool(converged),
        iterations=iterations,
        objective_trace=trace,
    )


def linear_predictor(fit: LogisticFit, features: np.ndarray) -> np.ndarray:
    """Intercept plus features @ slopes."""
    x = np.asarray(features, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[1] != fit.n_features:
        raise ShapeError(
            f"features have {x.shape[1]} columns but the fit expects {fit.n_features}"
        )
    return fit.weights[0] + x @ fit.weights[1:]


def predict_proba(fit: LogisticFit, features: np.ndarray) -> np.ndarray:
    """Positive-class probabilities 1 / (1 + exp(-eta)), kept inside (0, 1)."""
    return np.clip(
        expit(linear_predictor(fit, features)), _PROBABILITY_FLOOR, _PROBABILITY_CEIL
    )


def classify(probabilities: np.ndarray, threshold: float = 0.5) -> np.ndarray:
    """1 where probability >= threshold, else 0."""
    if not 0.0 < threshold < 1.0:
        raise InvalidParameterError(f"threshold must lie in (0, 1), got {threshold}")
    return (np.asarray(probabilities) >= threshold).astype(np.uint8)


def accuracy(predictions: np.ndarray, labels: np.ndarray) -> float:
    """Fraction of predictions equal to the labels."""
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    if predictions.shape != labels.shape:
        raise ShapeError(f"predictions {predictions.shape} vs labels {labels.shape}")
    return float(np.mean(predictions == labels))


def pearson_corr(a: np.ndarray, b: np.ndarray) -> float:
    """Sample Pearson correlation."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ShapeError(f"need two equal-length vectors, got {a.shape} and {b.shape}")
    if a.shape[0] < 3:
        raise ShapeError("correlation needs at least 3 observations")

    da = a - a.mean()
    db = b - b.mean()
    na = np.sqrt(da @ da)
    nb = np.sqrt(db @ db)
    if na == 0.0 or nb == 0.0:
        raise DegenerateVarianceError("correlation input has zero variance")
    return float(np.clip((da @ db) / (na * nb), -1.0, 1.0))


def partial_corr(a: np.ndarray, b: np.ndarray, z: np.ndarray) -> float:
    """
    Partial correlation of a and b given z.

    r_ab.z = (r_ab - r_az r_bz) / sqrt((1 - r_az^2)(1 - r_bz^2))

    Raises:
        CollinearityError: If a or b is perfectly correlated with z
    """
    r_ab = pearson_corr(a, b)
    r_az = pearson_corr(a, z)
    r_bz = pearson_corr(b, z)
    denominator = (1.0 - r_az**2) * (1.0 - r_bz**2)
    if denominator <= 1e-24 or abs(r_az) >= 1.0 - 1e-12 or abs(r_bz) >= 1.0 - 1e-12:
        raise CollinearityError(
            f"conditioning variable is collinear (r_az={r_az:.6f}, r_bz={r_bz:.6f})"
        )
    return float(np.clip((r_ab - r_az * r_bz) / np.sqrt(denominator), -1.0, 1.0))
