"""
Conditional-independence sanity checks for (counterfactual) predictions.

If the adjustment removed the confounder's influence, predictions R should
depend on C only through the selection path via Y, so cor(R, C | Y) ~ 0
while the other five relations stay away from zero.
"""

from typing import Optional

import numpy as np

from ..exceptions import (
    CollinearityError,
    DegenerateInputError,
    DegenerateVarianceError,
    InvalidParameterError,
)
from ..models.diagnostics import (
    EXPECTED_PATTERN,
    RELATIONS,
    CIReport,
    Expectation,
    RelationVerdict,
)
from .statistics import partial_corr, pearson_corr

MIN_SAMPLES = 30

# Relations whose dependence runs through the C-Y association; they cannot
# hold when C and Y are independent by construction (pr = 0.5).
_SELECTION_DEPENDENT = ("corRC", "corCY", "corCY_givenR")


def _judge(value: float, expectation: Expectation, independence: float, dependence: float) -> RelationVerdict:
    magnitude = abs(value)
    if expectation is Expectation.DEPENDENT:
        return RelationVerdict.PASS if magnitude >= dependence else RelationVerdict.FAIL
    return RelationVerdict.PASS if magnitude <= independence else RelationVerdict.FAIL


def ci_report(
    r_hat: np.ndarray,
    c: np.ndarray,
    y: np.ndarray,
    independence_threshold: float = 0.1,
    dependence_threshold: float = 0.2,
    pr: Optional[float] = None,
) -> CIReport:
    """
    Compute the six marginal/partial correlations and judge them.

    Args:
        r_hat: Predicted positive-class probabilities
        c: Confounder values
        y: Labels
        independence_threshold: |cor| at or below which a relation counts as independence
        dependence_threshold: |cor| at or above which a relation counts as dependence
        pr: Coupling proportion of the test set; at pr = 0.5 the relations
            that need a C-Y association are marked not evaluated

    Raises:
        DegenerateInputError: On short, mismatched or constant inputs
    """
    if not independence_threshold < dependence_threshold:
        raise InvalidParameterError("independence_threshold must be below dependence_threshold")

    r = np.asarray(r_hat, dtype=float)
    c = np.asarray(c, dtype=float)
    y = np.asarray(y, dtype=float)
    if not (r.shape == c.shape == y.shape) or r.ndim != 1:
        raise DegenerateInputError(
            f"inputs must be equal-length vectors, got {r.shape}, {c.shape}, {y.shape}"
        )
    if r.shape[0] < MIN_SAMPLES:
        raise DegenerateInputError(f"need at least {MIN_SAMPLES} observations, got {r.shape[0]}")
    for name, values in (("c", c), ("y", y)):
        if np.unique(values).size < 2:
            raise DegenerateInputError(f"'{name}' takes a single value in the sample")

    try:
        values = {
            "corRY": pearson_corr(r, y),
            "corRC": pearson_corr(r, c),
            "corCY": pearson_corr(c, y),
            "corRY_givenC": partial_corr(r, y, c),
            "corRC_givenY": partial_corr(r, c, y),
            "corCY_givenR": partial_corr(c, y, r),
        }
    except (DegenerateVarianceError, CollinearityError) as e:
        raise DegenerateInputError(str(e)) from e

    independent_cy = pr is not None and abs(pr - 0.5) < 1e-9
    verdicts = {}
    for relation in RELATIONS:
        if independent_cy and relation in _SELECTION_DEPENDENT:
            verdicts[relation] = RelationVerdict.NOT_EVALUATED
        else:
            verdicts[relation] = _judge(
                values[relation],
                EXPECTED_PATTERN[relation],
                independence_threshold,
                dependence_threshold,
            )

    return CIReport(
        **values,
        dependence_threshold=dependence_threshold,
        independence_threshold=independence_threshold,
        verdicts=verdicts,
    )
