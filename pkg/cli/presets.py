"""Пресеты численных экспериментов"""
from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np

import config
from errors import ConfigError
from gfd.stencil import WeightScheme


@dataclass(frozen=True)
class ExperimentPreset:
    """Параметры эксперимента"""
    name: str
    u0: Callable[[np.ndarray, np.ndarray], np.ndarray]
    gamma: str
    mu: float
    dt: float = config.DEFAULT_DT
    weights: WeightScheme = field(default_factory=WeightScheme)
    report_times: List[float] = field(default_factory=lambda: list(config.REPORT_TIMES))
    snapshot_times: List[float] = field(default_factory=lambda: list(config.REPORT_TIMES))
    strict_hypotheses: bool = True
    laplacian_factor: str = config.LAPLACIAN_FACTOR_GAMMA  # множитель в оценке шага


def example1_initial(x, y):
    """u0 = 4 + cos(3πx) + 2cos(πy)"""
    return 4.0 + np.cos(3.0 * np.pi * np.asarray(x, dtype=float)) + 2.0 * np.cos(np.pi * np.asarray(y, dtype=float))


def example2_profile(x):
    """f(x) = 19.2x^4 - 25.6x^3 + 9.6x^2 + 0.1 на [0, 0.5], 0.5 правее"""
    x = np.asarray(x, dtype=float)
    polynomial = 19.2 * x ** 4 - 25.6 * x ** 3 + 9.6 * x ** 2 + 0.1
    return np.where(x <= 0.5, polynomial, 0.5)


def example2_initial(x, y):
    """u0 = f(x)(1 + cos(2πy))"""
    return example2_profile(x) * (1.0 + np.cos(2.0 * np.pi * np.asarray(y, dtype=float)))


def equilibrium_initial(x, y):
    """u0 = 1"""
    return np.ones_like(np.asarray(x, dtype=float))


def preset_example1() -> ExperimentPreset:
    return ExperimentPreset(
        name=config.PRESET_EXAMPLE1,
        u0=example1_initial,
        gamma=config.GAMMA_EXP,
        mu=3.0,
    )


def preset_example2() -> ExperimentPreset:
    # u0 обращается в ноль на прямой y = 0.5
    return ExperimentPreset(
        name=config.PRESET_EXAMPLE2,
        u0=example2_initial,
        gamma=config.GAMMA_RATIONAL,
        mu=4.5,
        snapshot_times=[0.05, 0.1, 0.25, 0.5, 1.0, 5.0],
        strict_hypotheses=False,
    )


def get_preset(name: str) -> ExperimentPreset:
    """Пресет по имени"""
    presets = {
        config.PRESET_EXAMPLE1: preset_example1,
        config.PRESET_EXAMPLE2: preset_example2,
    }
    if name not in presets:
        raise ConfigError(f"неизвестный пресет '{name}', доступны: {', '.join(config.PRESETS)}")
    return presets[name]()
