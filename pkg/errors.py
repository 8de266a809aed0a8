"""Исключения решателя"""
from typing import Optional


class GfdError(Exception):
    """Базовая ошибка решателя"""


class ConfigError(GfdError):
    """Некорректная конфигурация или параметры"""


class CloudFormatError(GfdError):
    """Ошибка разбора файла облака"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"строка {line}: {message}"
        super().__init__(message)


class CloudGeometryError(GfdError):
    """Нарушены инварианты облака точек"""


class StarSizeError(GfdError):
    """Облако слишком мало для звезды заданного размера"""


class DegenerateStarError(GfdError):
    """Вырожденная звезда: матрица A не положительно определена"""

    def __init__(self, center: int, reason: str):
        self.center = center
        super().__init__(f"вырожденная звезда в узле {center}: {reason}")


class StencilMismatchError(GfdError):
    """Число значений не совпадает со звездой"""


class EllipticSolveError(GfdError):
    """Эллиптическая система не решена с требуемой невязкой"""

    def __init__(self, message: str, residual: float = float("nan")):
        self.residual = residual
        super().__init__(f"{message} (невязка {residual:.3e})")


class DivergenceError(GfdError):
    """Решение перестало быть конечным"""

    def __init__(self, step: int, node: int):
        self.step = step
        self.node = node
        super().__init__(f"расходимость на шаге {step} в узле {node}")


class StabilityBreakdownError(GfdError):
    """Неположительный знаменатель в оценке шага"""

    def __init__(self, node: int, denominator: float):
        self.node = node
        self.denominator = denominator
        super().__init__(
            f"оценка шага неприменима в узле {node}: знаменатель {denominator:.6g}"
        )


class StabilityViolationError(GfdError):
    """Шаг по времени превышает оценку устойчивости"""

    def __init__(self, dt: float, bound: float, node: int):
        self.dt = dt
        self.bound = bound
        self.node = node
        super().__init__(f"dt = {dt:g} превышает оценку {bound:.6g} (узел {node})")


class HypothesisError(GfdError):
    """Не выполнены гипотезы о функции подвижности"""

    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(report.failures) or "гипотезы не выполнены")


class MotilityDomainError(GfdError):
    """Аргумент вне области определения функции подвижности"""
