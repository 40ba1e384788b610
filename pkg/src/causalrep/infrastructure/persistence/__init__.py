"""Persistence layer: binary containers and CSV outputs."""

from .idx_reader import load_mnist_idx, read_idx_images, read_idx_labels, write_idx_images, write_idx_labels
from .colored_dataset_store import (
    load_colored_dataset,
    load_shift_suite,
    save_colored_dataset,
    save_shift_suite,
)
from .checkpoint_store import load_checkpoint, save_checkpoint
from .fit_table_store import load_fit_table, save_fit_table
from .feature_store import load_columns, load_features, save_columns, save_features
from .results_store import ResultsStore, load_predictions

__all__ = [
    "load_mnist_idx",
    "read_idx_images",
    "read_idx_labels",
    "write_idx_images",
    "write_idx_labels",
    "load_colored_dataset",
    "load_shift_suite",
    "save_colored_dataset",
    "save_shift_suite",
    "load_checkpoint",
    "save_checkpoint",
    "load_fit_table",
    "save_fit_table",
    "load_columns",
    "load_features",
    "save_columns",
    "save_features",
    "ResultsStore",
    "load_predictions",
]
