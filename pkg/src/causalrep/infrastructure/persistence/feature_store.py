"""CSV files of feature matrices and per-example vectors (labels, confounders)."""

from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from ...domain.exceptions import ShapeError

PathLike = Union[str, Path]


def save_features(path: PathLike, values: np.ndarray, prefix: str = "x") -> Path:
    """One row per example, columns ``x1..xk``, full double precision."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise ShapeError(f"features must be n x k, got shape {values.shape}")
    frame = pd.DataFrame(values, columns=[f"{prefix}{j + 1}" for j in range(values.shape[1])])
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    return path


def load_features(path: PathLike) -> np.ndarray:
    frame = pd.read_csv(path, float_precision="round_trip")
    if frame.empty or frame.shape[1] == 0:
        raise ShapeError(f"{path}: no feature rows")
    return frame.to_numpy(dtype=float)


def save_columns(path: PathLike, **columns: np.ndarray) -> Path:
    """Named integer columns of equal length, e.g. ``label=y`` or ``C=c``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lengths = {name: len(values) for name, values in columns.items()}
    if len(set(lengths.values())) > 1:
        raise ShapeError(f"columns differ in length: {lengths}")
    pd.DataFrame({name: np.asarray(v) for name, v in columns.items()}).to_csv(
        path, index=False, lineterminator="\n"
    )
    return path


def load_columns(path: PathLike) -> pd.DataFrame:
    frame = pd.read_csv(path, float_precision="round_trip")
    if frame.shape[1] == 0:
        raise ShapeError(f"{path}: no columns")
    return frame
