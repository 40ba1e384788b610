"""Tab-separated storage of deconfounding fits (one row per feature)."""

from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from ...domain.exceptions import ShapeError
from ...domain.models.deconfounding import DeconfoundFit

PathLike = Union[str, Path]

_FIXED = ["feature", "intercept", "Y"]


def save_fit_table(path: PathLike, fit: DeconfoundFit) -> Path:
    """
    Write ``fit`` as TSV with a ``#``-prefixed header line::

        # feature  intercept  Y  C
        0          0.12       1.3  -0.8
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = _FIXED + list(fit.confounder_names)
    table = pd.DataFrame(
        np.column_stack([fit.intercepts, fit.label_coefs, fit.confounder_coefs]),
        columns=columns[1:],
    )
    table.insert(0, "feature", np.arange(fit.k))
    with open(path, "w", newline="") as f:
        f.write("# " + "\t".join(columns) + "\n")
        table.to_csv(f, sep="\t", header=False, index=False, float_format="%.17g", lineterminator="\n")
    return path


def load_fit_table(path: PathLike) -> DeconfoundFit:
    path = Path(path)
    with open(path) as f:
        header = f.readline()
    if not header.startswith("#"):
        raise ShapeError(f"{path}: missing '#' header line")
    columns = header.lstrip("#").strip().split("\t")
    if columns[:3] != _FIXED or len(columns) < 4:
        raise ShapeError(f"{path}: header must start with {_FIXED} and name a confounder, got {columns}")

    table = pd.read_csv(
        path, sep="\t", skiprows=1, header=None, names=columns, float_precision="round_trip"
    )
    table = table.sort_values("feature")
    confounders = columns[3:]
    return DeconfoundFit(
        intercepts=table["intercept"].to_numpy(dtype=float),
        label_coefs=table["Y"].to_numpy(dtype=float),
        confounder_coefs=table[confounders].to_numpy(dtype=float),
        confounder_names=tuple(confounders),
    )
