"""Behavioral checks of a finished shift experiment."""

import numpy as np

from ..models.dataset import ShiftLevel
from ..models.experiment import AcceptanceCheck, ExperimentResult, Method


def _median_accuracy(result: ExperimentResult, shift: ShiftLevel, method: Method) -> float:
    values = result.accuracies(shift, method)
    return float(np.median(values)) if values.size else float("nan")


def _median_abs_rc_given_y(result: ExperimentResult, shift: ShiftLevel, method: Method) -> float:
    values = [
        abs(r.ci_report.corRC_givenY)
        for r in result.rows
        if r.shift is shift and r.method is method
    ]
    return float(np.median(values)) if values else float("nan")


def _spread(values: list[float]) -> float:
    return max(values) - min(values)


def evaluate_acceptance(
    result: ExperimentResult,
    degradation_gap: float = 0.20,
    stability_spread: float = 0.10,
    independence_threshold: float = 0.1,
    dependence_threshold: float = 0.2,
) -> list[AcceptanceCheck]:
    """
    Check degradation, stability, no-shift cost, balancing order and CI patterns.

    Medians are taken over replications.
    """
    shifts = ShiftLevel.ordered()
    medians = {
        method: [_median_accuracy(result, s, method) for s in shifts] for method in Method
    }
    checks = []

    none = medians[Method.NONE]
    decreasing = all(a > b for a, b in zip(none, none[1:]))
    gap = none[0] - none[-1]
    checks.append(AcceptanceCheck(
        name="degradation without adjustment",
        passed=decreasing and gap > degradation_gap,
        detail=f"medians {[round(v, 4) for v in none]}, gap {gap:.4f}",
    ))

    causal_spread = _spread(medians[Method.CAUSAL])
    per_replication = []
    for replication in result.replications:
        spreads = {}
        for method in (Method.NONE, Method.CAUSAL):
            accs = [
                r.accuracy for r in result.rows
                if r.replication == replication and r.method is method
            ]
            spreads[method] = _spread(accs)
        per_replication.append(spreads[Method.CAUSAL] < spreads[Method.NONE])
    checks.append(AcceptanceCheck(
        name="stability with adjustment",
        passed=causal_spread < stability_spread and all(per_replication),
        detail=(
            f"causal median spread {causal_spread:.4f}; narrower than 'none' in "
            f"{sum(per_replication)}/{len(per_replication)} replications"
        ),
    ))

    no_shift_none = none[0]
    no_shift_causal = medians[Method.CAUSAL][0]
    checks.append(AcceptanceCheck(
        name="no-shift cost of adjustment",
        passed=no_shift_none > no_shift_causal,
        detail=f"none {no_shift_none:.4f} vs causal {no_shift_causal:.4f}",
    ))

    ordering = []
    for shift in (ShiftLevel.SHIFT_4, ShiftLevel.SHIFT_5):
        c, s, n = (_median_accuracy(result, shift, m) for m in (Method.CAUSAL, Method.SMOTE, Method.NONE))
        ordering.append((shift, c > s > n, c, s, n))
    checks.append(AcceptanceCheck(
        name="balancing sits between",
        passed=all(ok for _, ok, *_ in ordering),
        detail="; ".join(
            f"{shift.value}: causal {c:.4f} smote {s:.4f} none {n:.4f}"
            for shift, _, c, s, n in ordering
        ),
    ))

    causal_ci = [_median_abs_rc_given_y(result, s, Method.CAUSAL) for s in shifts]
    none_ci = _median_abs_rc_given_y(result, ShiftLevel.NO_SHIFT, Method.NONE)
    checks.append(AcceptanceCheck(
        name="cor(R, C | Y) diagnostic",
        passed=all(v < independence_threshold for v in causal_ci) and none_ci > dependence_threshold,
        detail=(
            f"causal max median {max(causal_ci):.4f}; none at no-shift {none_ci:.4f}"
        ),
    ))
    return checks
