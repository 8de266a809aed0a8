"""Валидация гипотез модели и входных данных"""
from dataclasses import dataclass, field
import logging
from typing import List, Optional, Tuple

import numpy as np

import config
from errors import ConfigError
from model.motility import ModelParameters, MotilityFunction
from utils.helpers import parse_grid

logger = logging.getLogger(__name__)


@dataclass
class ValidationReport:
    """Результат проверки"""
    name: str
    failures: List[str] = field(default_factory=list)
    mu0: Optional[float] = None  # max (-2γ' + γ''s) по выборке
    c_gamma: Optional[float] = None  # max |γ'|^2 / γ по выборке
    minimum: Optional[float] = None
    maximum: Optional[float] = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        lines = [f"{self.name}: {'выполнено' if self.passed else 'НЕ выполнено'}"]
        if self.mu0 is not None:
            lines.append(f"  mu0 = {self.mu0:.6g}")
        if self.c_gamma is not None:
            lines.append(f"  c_gamma = {self.c_gamma:.6g}")
        if self.minimum is not None:
            lines.append(f"  min = {self.minimum:.6g}, max = {self.maximum:.6g}")
        lines.extend(f"  - {failure}" for failure in self.failures)
        return "\n".join(lines)


def validate_hypotheses(gamma: MotilityFunction, params: ModelParameters,
                        s_max: float = config.HYPOTHESIS_S_MAX,
                        n_samples: int = config.HYPOTHESIS_SAMPLES) -> ValidationReport:
    """Проверка знаков γ, γ', γ'', γ''' и оценок mu0 < mu, c_gamma по выборке на [0, s_max]"""
    if not s_max > 0:
        raise ConfigError(f"s_max должно быть положительным, получено {s_max}")
    if n_samples < config.MIN_HYPOTHESIS_SAMPLES:
        raise ConfigError(f"нужно не меньше {config.MIN_HYPOTHESIS_SAMPLES} точек, получено {n_samples}")

    s = np.linspace(0.0, s_max, n_samples)
    g, g1, g2, g3 = gamma.derivatives(s)
    report = ValidationReport(name=f"гипотезы для γ = {gamma.name}, mu = {params.mu:g}")

    for values, condition, label in (
        (g, g >= 0, "γ >= 0"),
        (g1, g1 <= 0, "γ' <= 0"),
        (g2, g2 >= 0, "γ'' >= 0"),
        (g3, g3 <= 0, "γ''' <= 0"),
    ):
        if not np.all(condition):
            worst = s[np.argmin(condition)]
            report.failures.append(f"нарушено {label} при s = {worst:.6g}")

    report.mu0 = float(np.max(-2.0 * g1 + g2 * s))
    if not report.mu0 < params.mu:
        report.failures.append(f"mu0 = {report.mu0:.6g} не меньше mu = {params.mu:g}")

    zero = g == 0
    if np.any(zero & (g1 != 0)):
        report.c_gamma = float("inf")
        report.failures.append("c_gamma не ограничена: γ = 0 при γ' != 0")
    else:
        positive = ~zero
        ratio = g1[positive] ** 2 / g[positive]
        report.c_gamma = float(ratio.max()) if ratio.size else 0.0

    _log_report(report)
    return report


def validate_initial_condition(values: np.ndarray) -> ValidationReport:
    """Проверка положительности начальных данных"""
    values = np.asarray(values, dtype=float)
    report = ValidationReport(name="начальное условие u0")
    if values.size == 0:
        report.failures.append("начальное условие не задано")
        return report

    report.minimum = float(np.min(values))
    report.maximum = float(np.max(values))
    if not np.all(np.isfinite(values)):
        report.failures.append("u0 содержит нечисловые значения")
    elif not report.minimum > 0:
        report.failures.append(f"min u0 = {report.minimum:.6g} не положителен")

    _log_report(report)
    return report


def check_derivatives(gamma: MotilityFunction, n_points: int = 1000, s_max: float = 20.0,
                      seed: int = 0, tolerance: float = 1e-6) -> ValidationReport:
    """Сверка производных γ с центральными разностями в случайных точках"""
    rng = np.random.default_rng(seed)
    s = rng.uniform(0.0, s_max, n_points)
    step = 5e-5 * np.maximum(1.0, s)
    report = ValidationReport(name=f"производные γ = {gamma.name}")

    for label, lower, upper in (
        ("γ'", gamma.gamma, gamma.first),
        ("γ''", gamma.first, gamma.second),
        ("γ'''", gamma.second, gamma.third),
    ):
        estimate = (lower(s + step) - lower(s - step)) / (2.0 * step)
        exact = upper(s)
        error = np.abs(estimate - exact) / np.maximum(np.abs(exact), np.finfo(float).tiny)
        if error.max() > tolerance:
            report.failures.append(f"{label}: относительная ошибка {error.max():.3e}")

    _log_report(report)
    return report


def validate_time_step(dt: float, t_final: float) -> bool:
    """0 < dt <= t_final"""
    try:
        return 0 < float(dt) <= float(t_final)
    except (TypeError, ValueError):
        return False


def validate_snapshot_times(times: List[float], t_final: float) -> bool:
    """Моменты снимков отсортированы и лежат в [0, t_final]"""
    return list(times) == sorted(times) and all(0 <= t <= t_final for t in times)


def validate_grid_string(text: str) -> Optional[Tuple[int, int]]:
    """Разбор и проверка размера сетки"""
    try:
        nx, ny = parse_grid(text)
    except (ValueError, TypeError):
        return None
    if nx < config.MIN_GRID_SIZE or ny < config.MIN_GRID_SIZE:
        return None
    return nx, ny


def _log_report(report: ValidationReport) -> None:
    if report.passed:
        logger.info(f"Проверка '{report.name}' пройдена")
    else:
        logger.warning(f"Проверка '{report.name}' не пройдена: {'; '.join(report.failures)}")
