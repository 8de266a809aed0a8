"""Функции подвижности γ и параметры модели"""
from dataclasses import dataclass
import logging
from typing import Callable, Dict

import numpy as np

import config
from errors import ConfigError, MotilityDomainError

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class MotilityFunction:
    """γ и три ее производные

    Вычислители чистые и векторизованы по numpy.
    """
    name: str
    gamma: Evaluator
    first: Evaluator
    second: Evaluator
    third: Evaluator

    def derivatives(self, s) -> tuple:
        """(γ, γ', γ'', γ''') в точках s"""
        return self.gamma(s), self.first(s), self.second(s), self.third(s)


@dataclass(frozen=True)
class ModelParameters:
    """Параметры модели"""
    mu: float  # скорость логистического роста

    def __post_init__(self):
        if not self.mu > 0:
            raise ConfigError(f"mu должно быть положительным, получено {self.mu}")


def gamma_exp() -> MotilityFunction:
    """γ(s) = exp(-s)"""
    def value(s):
        return np.exp(-np.asarray(s, dtype=float))

    def negative(s):
        return -np.exp(-np.asarray(s, dtype=float))

    return MotilityFunction(name=config.GAMMA_EXP, gamma=value, first=negative, second=value, third=negative)


def gamma_rational() -> MotilityFunction:
    """γ(s) = (1 + s)^(-2), определена при s > -1"""
    def base(s):
        s = np.asarray(s, dtype=float)
        if np.any(s <= -1.0):
            raise MotilityDomainError("γ(s) = (1+s)^(-2) определена только при s > -1")
        return 1.0 + s

    return MotilityFunction(
        name=config.GAMMA_RATIONAL,
        gamma=lambda s: base(s) ** -2,
        first=lambda s: -2.0 * base(s) ** -3,
        second=lambda s: 6.0 * base(s) ** -4,
        third=lambda s: -24.0 * base(s) ** -5,
    )


_BUILTIN: Dict[str, Callable[[], MotilityFunction]] = {
    config.GAMMA_EXP: gamma_exp,
    config.GAMMA_RATIONAL: gamma_rational,
}


def get_motility(name: str) -> MotilityFunction:
    """Встроенная функция подвижности по имени"""
    try:
        return _BUILTIN[name]()
    except KeyError:
        raise ConfigError(f"неизвестная функция подвижности '{name}', доступны: {', '.join(config.GAMMA_NAMES)}") from None
