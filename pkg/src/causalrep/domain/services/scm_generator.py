"""Synthetic linear structural-model data with known coefficients."""

import numpy as np

from ..exceptions import InvalidJointTableError, InvalidParameterError, ShapeError
from ..models.dataset import SynthScmDataset


def validate_joint_table(joint_cy: np.ndarray) -> np.ndarray:
    """Return the table as a float array after checking it is a 2x2 distribution."""
    table = np.asarray(joint_cy, dtype=float)
    if table.shape != (2, 2):
        raise InvalidJointTableError(f"joint table must be 2x2, got shape {table.shape}")
    if not np.all(np.isfinite(table)) or np.any(table < 0):
        raise InvalidJointTableError("joint table entries must be finite and non-negative")
    if abs(table.sum() - 1.0) > 1e-9:
        raise InvalidJointTableError(f"joint table must sum to 1, got {table.sum():.12g}")
    return table


def synth_scm(
    n: int,
    k: int,
    joint_cy: np.ndarray,
    coefs: np.ndarray,
    noise_sd: float,
    seed: int,
) -> SynthScmDataset:
    """
    Draw (c, y) pairs from ``joint_cy`` and features from the linear model.

    Args:
        n: Number of examples
        k: Number of features
        joint_cy: 2x2 table, joint_cy[c, y] = Pr(C = c, Y = y); the selection
            mechanism is whatever coupling this table encodes
        coefs: k x 3 array of per-feature (mu, beta_xy, beta_xc)
        noise_sd: Standard deviation of the Gaussian noise W
        seed: RNG seed
    """
    table = validate_joint_table(joint_cy)
    coefs = np.asarray(coefs, dtype=float)
    if coefs.shape != (k, 3):
        raise ShapeError(f"coefs must be ({k}, 3), got {coefs.shape}")
    if noise_sd <= 0:
        raise InvalidParameterError(f"noise_sd must be positive, got {noise_sd}")
    if n < 1:
        raise InvalidParameterError(f"n must be positive, got {n}")

    rng = np.random.default_rng(seed)
    cells = rng.choice(4, size=n, p=table.ravel())
    c = (cells // 2).astype(np.uint8)
    y = (cells % 2).astype(np.uint8)

    mu, beta_y, beta_c = coefs[:, 0], coefs[:, 1], coefs[:, 2]
    noise = rng.normal(0.0, noise_sd, size=(n, k))
    x = mu + np.outer(y, beta_y) + np.outer(c, beta_c) + noise

    return SynthScmDataset(y=y, c=c, x=x, true_coefs=coefs.copy(), noise_sd=float(noise_sd))
