import numpy as np
import pytest

import config
from errors import ConfigError, MotilityDomainError
from model.motility import ModelParameters, MotilityFunction, gamma_exp, gamma_rational, get_motility
from model.validators import (
    check_derivatives, validate_grid_string, validate_hypotheses, validate_initial_condition,
    validate_snapshot_times, validate_time_step,
)


def test_exp_values():
    gamma = gamma_exp()
    g, g1, g2, g3 = gamma.derivatives(np.array([0.0, 1.0]))
    assert g == pytest.approx([1.0, np.exp(-1.0)])
    assert g1 == pytest.approx([-1.0, -np.exp(-1.0)])
    assert g2 == pytest.approx(g)
    assert g3 == pytest.approx(g1)


def test_rational_values():
    gamma = gamma_rational()
    g, g1, g2, g3 = gamma.derivatives(np.array([0.0, 1.0]))
    assert g == pytest.approx([1.0, 0.25])
    assert g1 == pytest.approx([-2.0, -0.25])
    assert g2 == pytest.approx([6.0, 0.375])
    assert g3 == pytest.approx([-24.0, -0.75])


@pytest.mark.parametrize("s", [-1.0, -2.5])
def test_rational_domain(s):
    with pytest.raises(MotilityDomainError):
        gamma_rational().gamma(np.array([0.5, s]))


def test_get_motility():
    assert get_motility(config.GAMMA_EXP).name == config.GAMMA_EXP
    assert get_motility(config.GAMMA_RATIONAL).name == config.GAMMA_RATIONAL
    with pytest.raises(ConfigError):
        get_motility("linear")


@pytest.mark.parametrize("mu", [0.0, -3.0])
def test_mu_must_be_positive(mu):
    with pytest.raises(ConfigError):
        ModelParameters(mu=mu)


def test_exp_hypotheses():
    report = validate_hypotheses(gamma_exp(), ModelParameters(mu=3.0))
    assert report.passed
    assert report.mu0 == pytest.approx(2.0)
    assert report.c_gamma == pytest.approx(1.0)
    assert report.mu0 < 3.0


def test_exp_hypotheses_fail_for_small_mu():
    report = validate_hypotheses(gamma_exp(), ModelParameters(mu=1.0))
    assert not report.passed
    assert report.mu0 == pytest.approx(2.0)
    assert any("mu0" in failure for failure in report.failures)


def test_rational_hypotheses():
    report = validate_hypotheses(gamma_rational(), ModelParameters(mu=4.5))
    assert report.passed
    assert report.mu0 == pytest.approx(4.0)
    assert report.c_gamma == pytest.approx(4.0)
    assert report.mu0 < 4.5


def test_hypotheses_monotone_in_mu():
    results = [validate_hypotheses(gamma_exp(), ModelParameters(mu=mu), n_samples=1000).passed
               for mu in (0.5, 1.5, 2.5, 3.5, 10.0)]
    assert results == sorted(results)
    assert results[-1]


def test_sign_violation_reported():
    increasing = MotilityFunction(
        name="growing",
        gamma=lambda s: 1.0 + np.asarray(s, dtype=float),
        first=lambda s: np.ones_like(np.asarray(s, dtype=float)),
        second=lambda s: np.zeros_like(np.asarray(s, dtype=float)),
        third=lambda s: np.zeros_like(np.asarray(s, dtype=float)),
    )
    report = validate_hypotheses(increasing, ModelParameters(mu=10.0), n_samples=1000)
    assert not report.passed
    assert any("γ' <= 0" in failure for failure in report.failures)


def test_hypothesis_sampling_limits():
    with pytest.raises(ConfigError):
        validate_hypotheses(gamma_exp(), ModelParameters(mu=3.0), n_samples=10)
    with pytest.raises(ConfigError):
        validate_hypotheses(gamma_exp(), ModelParameters(mu=3.0), s_max=0.0)


@pytest.mark.parametrize("make", [gamma_exp, gamma_rational])
def test_derivatives_consistent(make):
    assert check_derivatives(make()).passed


def test_wrong_derivative_detected():
    gamma = gamma_exp()
    broken = MotilityFunction(name="broken", gamma=gamma.gamma, first=gamma.first,
                              second=lambda s: 2.0 * gamma.second(s), third=gamma.third)
    report = check_derivatives(broken)
    assert not report.passed
    assert len(report.failures) == 2


def test_initial_condition():
    report = validate_initial_condition(np.array([0.5, 1.0, 7.0]))
    assert report.passed
    assert report.minimum == 0.5 and report.maximum == 7.0
    assert not validate_initial_condition(np.array([0.5, 0.0])).passed
    assert not validate_initial_condition(np.array([0.5, np.nan])).passed
    assert not validate_initial_condition(np.array([])).passed


def test_report_summary():
    report = validate_hypotheses(gamma_exp(), ModelParameters(mu=1.0), n_samples=1000)
    text = report.summary()
    assert "НЕ выполнено" in text
    assert "mu0 = 2" in text


def test_time_step_validation():
    assert validate_time_step(0.001, 5.0)
    assert validate_time_step(5.0, 5.0)
    assert not validate_time_step(0.0, 5.0)
    assert not validate_time_step(6.0, 5.0)
    assert not validate_time_step("abc", 5.0)


def test_snapshot_times_validation():
    assert validate_snapshot_times([0.05, 0.1, 5.0], 5.0)
    assert not validate_snapshot_times([0.1, 0.05], 5.0)
    assert not validate_snapshot_times([6.0], 5.0)


def test_grid_string_validation():
    assert validate_grid_string("21x21") == (21, 21)
    assert validate_grid_string("2x21") is None
    assert validate_grid_string("abc") is None
