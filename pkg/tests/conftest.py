"""Shared pytest fixtures for causalrep tests."""

from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from causalrep.domain.models import (
    CIReport,
    ExperimentResult,
    Method,
    RawMnist,
    RelationVerdict,
    ResultRow,
    ShiftLevel,
)
from causalrep.domain.models.diagnostics import RELATIONS
from causalrep.infrastructure.logging import CausalRepLogger, LogContext
from causalrep.infrastructure.persistence import write_idx_images, write_idx_labels


@pytest.fixture(autouse=True)
def quiet_logger():
    """Each test starts with a silent shared logger and an empty log context."""
    CausalRepLogger.configure(level="WARNING", console=False)
    LogContext.clear()
    yield
    LogContext.clear()


def synthetic_digits(n: int, size: int = 8, seed: int = 0) -> RawMnist:
    """
    Tiny digit-like images whose stroke position depends on the binary label.

    Digits cycle 0..9 so both binary labels are equally frequent. Digits 0-4
    light the upper-left quadrant, 5-9 the lower-right one, plus noise.
    """
    rng = np.random.default_rng(seed)
    digits = (np.arange(n) % 10).astype(np.uint8)
    images = rng.integers(0, 40, size=(n, size, size)).astype(np.int32)
    half = size // 2
    upper = digits < 5
    images[upper, :half, :half] += 180
    images[~upper, half:, half:] += 180
    return RawMnist(images=np.clip(images, 0, 255).astype(np.uint8), digits=digits)


@pytest.fixture
def raw_factory() -> Callable[..., RawMnist]:
    return synthetic_digits


@pytest.fixture
def idx_files(tmp_path: Path) -> dict[str, Path]:
    """Four IDX files (200 training, 100 test digits of 8x8 pixels)."""
    train = synthetic_digits(200, seed=1)
    test = synthetic_digits(100, seed=2)
    data = tmp_path / "mnist"
    return {
        "train_images": write_idx_images(data / "train-images-idx3-ubyte", train.images),
        "train_labels": write_idx_labels(data / "train-labels-idx1-ubyte", train.digits),
        "test_images": write_idx_images(data / "t10k-images-idx3-ubyte", test.images),
        "test_labels": write_idx_labels(data / "t10k-labels-idx1-ubyte", test.digits),
    }


def make_report(rc_given_y: float = 0.0, failed: bool = False) -> CIReport:
    """A CI report with fixed correlations; only cor(R, C | Y) varies."""
    values = {
        "corRY": 0.8,
        "corRC": 0.6,
        "corCY": 0.7,
        "corRY_givenC": 0.5,
        "corRC_givenY": rc_given_y,
        "corCY_givenR": 0.4,
    }
    verdicts = {r: RelationVerdict.PASS for r in RELATIONS}
    if failed:
        verdicts["corRC_givenY"] = RelationVerdict.FAIL
    return CIReport(
        **values,
        dependence_threshold=0.2,
        independence_threshold=0.1,
        verdicts=verdicts,
    )


@pytest.fixture
def report_factory() -> Callable[..., CIReport]:
    return make_report


def make_result(
    accuracies: dict[Method, list[float]],
    rc_given_y: dict[Method, float],
    replications: int = 3,
    jitter: float = 0.005,
) -> ExperimentResult:
    """
    An experiment result with per-shift accuracies for every method.

    Replication i adds ``i * jitter`` to each accuracy so medians equal the
    middle replication.
    """
    result = ExperimentResult()
    for replication in range(replications):
        for shift_index, shift in enumerate(ShiftLevel.ordered()):
            for method in Method:
                rc = rc_given_y[method]
                result.rows.append(ResultRow(
                    replication=replication,
                    shift=shift,
                    method=method,
                    accuracy=accuracies[method][shift_index] + replication * jitter,
                    ci_report=make_report(rc, failed=abs(rc) > 0.1),
                ))
    return result


@pytest.fixture
def result_factory() -> Callable[..., ExperimentResult]:
    return make_result


@pytest.fixture
def healthy_accuracies() -> dict[Method, list[float]]:
    """Accuracies shaped like a successful run: 'none' degrades, 'causal' stays flat."""
    return {
        Method.NONE: [0.97, 0.90, 0.80, 0.70, 0.60, 0.50],
        Method.SMOTE: [0.95, 0.90, 0.85, 0.80, 0.75, 0.70],
        Method.CAUSAL: [0.88, 0.87, 0.87, 0.86, 0.86, 0.85],
    }
