"""Tests for the counterfactual feature adjustment."""

import numpy as np
import pytest

from causalrep.domain.exceptions import InvalidParameterError, ShapeError, SingularDesignError
from causalrep.domain.models import FeatureMatrix
from causalrep.domain.services.deconfounder import (
    adjust_test,
    encode_confounders,
    fit_and_adjust_train,
    reconstruct_train,
)
from causalrep.domain.services.scm_generator import synth_scm
from causalrep.domain.services.statistics import ols_fit

pytestmark = pytest.mark.unit

JOINT = np.array([[0.45, 0.05], [0.05, 0.45]])
COEFS = np.array([
    [1.0, 2.0, -1.5],
    [0.0, -1.0, 0.8],
    [-0.5, 0.5, 2.0],
    [0.2, 0.0, -0.3],
])


@pytest.fixture
def scm():
    return synth_scm(10000, 4, JOINT, COEFS, noise_sd=0.1, seed=0)


def _design(y, c):
    return np.column_stack([np.ones(len(y)), y, c])


def test_adjusted_training_features_carry_no_confounder_signal(scm):
    adjusted, fit = fit_and_adjust_train(scm.x, scm.y, scm.c)

    refit = ols_fit(adjusted.values, _design(scm.y, scm.c))
    assert np.max(np.abs(refit.coefficients[2])) < 1e-8
    np.testing.assert_allclose(refit.coefficients[1], fit.label_coefs, atol=1e-10)


def test_fit_recovers_structural_coefficients(scm):
    _, fit = fit_and_adjust_train(scm.x, scm.y, scm.c)

    np.testing.assert_allclose(fit.confounder_coefs[:, 0], COEFS[:, 2], atol=0.02)
    np.testing.assert_allclose(fit.label_coefs, COEFS[:, 1], atol=0.02)
    assert fit.confounder_names == ("C",)


def test_both_forms_of_the_training_adjustment_agree(scm):
    adjusted, fit = fit_and_adjust_train(scm.x, scm.y, scm.c)
    np.testing.assert_allclose(reconstruct_train(fit, scm.y), adjusted.values, rtol=0, atol=1e-10)


def test_adjustment_is_idempotent(scm):
    once, _ = fit_and_adjust_train(scm.x, scm.y, scm.c)
    twice, refit = fit_and_adjust_train(once.values, scm.y, scm.c)

    assert np.max(np.abs(refit.confounder_coefs)) < 1e-8
    assert np.max(np.abs(twice.values - once.values)) < 1e-6


def test_test_adjustment_uses_training_coefficients_without_labels(scm):
    _, fit = fit_and_adjust_train(scm.x, scm.y, scm.c)
    test = synth_scm(500, 4, [[0.05, 0.45], [0.45, 0.05]], COEFS, noise_sd=0.1, seed=1)

    adjusted = adjust_test(FeatureMatrix(values=test.x), test.c, fit)
    expected = test.x - np.outer(test.c, fit.confounder_coefs[:, 0])
    np.testing.assert_allclose(adjusted.values, expected)
    assert adjusted.source_fit is fit


def test_shift_no_longer_moves_adjusted_features(scm):
    """Under a reversed coupling, adjusted features still depend on Y alone."""
    _, fit = fit_and_adjust_train(scm.x, scm.y, scm.c)
    shifted = synth_scm(20000, 4, [[0.05, 0.45], [0.45, 0.05]], COEFS, noise_sd=0.1, seed=2)

    adjusted = adjust_test(shifted.x, shifted.c, fit).values
    refit = ols_fit(adjusted, _design(shifted.y, shifted.c))
    assert np.max(np.abs(refit.coefficients[2])) < 0.02


def test_confounder_determined_by_label_is_singular():
    y = np.tile([0, 1], 50)
    x = np.random.default_rng(0).normal(size=(100, 3))
    with pytest.raises(SingularDesignError) as excinfo:
        fit_and_adjust_train(x, y, y.copy())
    assert excinfo.value.column == "C"


def test_multiple_named_confounders(scm):
    rng = np.random.default_rng(3)
    site = rng.integers(0, 2, size=scm.n)
    x = scm.x + np.outer(site, [0.5, -0.5, 1.0, 0.0])
    confounders = np.column_stack([scm.c, site])

    adjusted, fit = fit_and_adjust_train(x, scm.y, confounders, confounder_names=["color", "site"])
    assert fit.confounder_names == ("color", "site")
    assert fit.m == 2
    refit = ols_fit(adjusted.values, _design(scm.y, confounders))
    assert np.max(np.abs(refit.coefficients[2:])) < 1e-8


@pytest.mark.parametrize("labels", [np.zeros(5), np.zeros(12)])
def test_training_shapes_are_checked(labels):
    x = np.random.default_rng(0).normal(size=(10, 2))
    with pytest.raises(ShapeError):
        fit_and_adjust_train(x, labels, np.tile([0, 1], 5))


def test_too_few_training_rows():
    with pytest.raises(ShapeError):
        fit_and_adjust_train(np.ones((3, 2)), np.array([0, 1, 0]), np.array([1, 0, 0]))


def test_test_shapes_are_checked(scm):
    _, fit = fit_and_adjust_train(scm.x, scm.y, scm.c)
    with pytest.raises(ShapeError):
        adjust_test(np.zeros((5, 3)), np.zeros(5), fit)
    with pytest.raises(ShapeError):
        adjust_test(np.zeros((5, 4)), np.zeros(6), fit)
    with pytest.raises(ShapeError):
        adjust_test(np.zeros((5, 4)), np.zeros((5, 2)), fit)


def test_reconstruct_requires_training_residuals(scm):
    _, fit = fit_and_adjust_train(scm.x, scm.y, scm.c)
    stripped = type(fit)(
        intercepts=fit.intercepts,
        label_coefs=fit.label_coefs,
        confounder_coefs=fit.confounder_coefs,
        confounder_names=fit.confounder_names,
    )
    with pytest.raises(InvalidParameterError):
        reconstruct_train(stripped, scm.y)


class TestEncodeConfounders:

    def test_binary_confounder_is_one_column(self):
        values, names = encode_confounders(np.array([0, 1, 1, 0]))
        assert names == ("C",)
        assert values[:, 0].tolist() == [0.0, 1.0, 1.0, 0.0]

    def test_categorical_confounder_uses_reference_level(self):
        values, names = encode_confounders(np.array(["a", "b", "c", "a"]), name="site")
        assert names == ("site[b]", "site[c]")
        assert values.tolist() == [[0, 0], [1, 0], [0, 1], [0, 0]]

    def test_unknown_level_is_rejected(self):
        with pytest.raises(InvalidParameterError):
            encode_confounders(np.array([0, 1, 2]), levels=[0, 1])

    def test_single_level_is_rejected(self):
        with pytest.raises(InvalidParameterError):
            encode_confounders(np.array([1, 1, 1]))


def test_structural_oracle_over_many_features():
    """Estimated confounder effects sit within three standard errors of the truth."""
    coefs = np.random.default_rng(11).normal(size=(500, 3))
    train_set = synth_scm(10000, 500, JOINT, coefs, noise_sd=0.1, seed=12)

    estimate = ols_fit(train_set.x, _design(train_set.y, train_set.c))
    z = np.abs(estimate.coefficients[2] - coefs[:, 2]) / estimate.standard_errors[2]
    assert np.mean(z < 3.0) >= 0.99

    _, fit = fit_and_adjust_train(train_set.x, train_set.y, train_set.c)
    test_set = synth_scm(10000, 500, [[0.05, 0.45], [0.45, 0.05]], coefs, noise_sd=0.1, seed=13)
    adjusted = adjust_test(test_set.x, test_set.c, fit).values
    refit = ols_fit(adjusted, _design(test_set.y, test_set.c))

    # residual effect combines training and test estimation error
    se = np.hypot(refit.standard_errors[2], estimate.standard_errors[2])
    assert np.mean(np.abs(refit.coefficients[2]) / se < 3.0) >= 0.99


def test_without_a_confounder_effect_adjustment_is_estimation_noise():
    coefs = np.random.default_rng(21).normal(size=(40, 3))
    coefs[:, 2] = 0.0
    data = synth_scm(5000, 40, JOINT, coefs, noise_sd=1.0, seed=22)

    adjusted, _ = fit_and_adjust_train(data.x, data.y, data.c)
    estimate = ols_fit(data.x, _design(data.y, data.c))

    shift = np.mean(np.abs(adjusted.values - data.x), axis=0)
    bound = 3.0 * estimate.standard_errors[2] * np.mean(np.abs(data.c))
    assert np.mean(shift < bound) >= 0.95


def _structural_deviation(n: int, coefs: np.ndarray, seed: int) -> float:
    """Mean |X* - (mu + beta_XY Y + W)| over all features of one sample."""
    data = synth_scm(n, coefs.shape[0], JOINT, coefs, noise_sd=1.0, seed=seed)
    adjusted, _ = fit_and_adjust_train(data.x, data.y, data.c)
    without_confounder = data.x - np.outer(data.c, coefs[:, 2])
    return float(np.mean(np.abs(adjusted.values - without_confounder)))


def test_adjustment_error_shrinks_with_root_n():
    coefs = np.random.default_rng(31).normal(size=(200, 3))

    small = _structural_deviation(1000, coefs, seed=32)
    large = _structural_deviation(10000, coefs, seed=33)

    assert large < small
    assert np.sqrt(10) / 2 < small / large < 2 * np.sqrt(10)
