"""Domain services - Core numerical logic."""

from .statistics import (
    classify,
    factorize_design,
    logistic_fit,
    ols_fit,
    partial_corr,
    pearson_corr,
    predict_proba,
)
from .colorizer import (
    binarize_labels,
    colorize,
    downscale_raw,
    joint_proportions,
    make_shift_suite,
    subset_raw,
)
from .scm_generator import synth_scm
from .neural_network import (
    extract_features,
    forward,
    gradient_check,
    init_network,
    train,
)
from .deconfounder import adjust_test, encode_confounders, fit_and_adjust_train
from .balancer import rotate_image, smote_balance
from .ci_diagnostics import ci_report
from .acceptance import evaluate_acceptance
from .summary import results_frame, summarize

__all__ = [
    "classify",
    "factorize_design",
    "logistic_fit",
    "ols_fit",
    "partial_corr",
    "pearson_corr",
    "predict_proba",
    "binarize_labels",
    "colorize",
    "downscale_raw",
    "joint_proportions",
    "make_shift_suite",
    "subset_raw",
    "synth_scm",
    "extract_features",
    "forward",
    "gradient_check",
    "init_network",
    "train",
    "adjust_test",
    "encode_confounders",
    "fit_and_adjust_train",
    "rotate_image",
    "smote_balance",
    "ci_report",
    "evaluate_acceptance",
    "results_frame",
    "summarize",
]
