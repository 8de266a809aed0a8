"""Коэффициенты обобщенных конечных разностей

Для каждой звезды минимизируется взвешенный функционал наименьших квадратов
по ряду Тейлора второго порядка. Нормальная система A D = b решается через
разложение Холецкого, коэффициенты λ записываются в виде
    λ_{i,r} = w_i^2 (A^{-1} c_i)_r,   λ_{0,r} = Σ_i λ_{i,r},
а оценка производной r в центре равна -λ_{0,r} U_0 + Σ_i λ_{i,r} U_i.
Порядок производных: ∂x, ∂y, ∂xx, ∂yy, ∂xy.
"""
import csv
from dataclasses import dataclass
import logging
from pathlib import Path
from typing import List, Sequence, Union

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

import config
from cloud.stars import Star
from errors import ConfigError, DegenerateStarError, StencilMismatchError
from utils.helpers import format_float

logger = logging.getLogger(__name__)

DX, DY, DXX, DYY, DXY = range(5)


@dataclass(frozen=True)
class WeightScheme:
    """Веса w_i = |z_0 - z_i|^(-alpha)"""
    exponent: float = config.DEFAULT_WEIGHT_EXPONENT

    def __post_init__(self):
        if not self.exponent > 0:
            raise ConfigError(f"показатель весов должен быть положительным, получено {self.exponent}")

    def weights(self, offsets: np.ndarray) -> np.ndarray:
        offsets = np.atleast_2d(offsets)
        squared = offsets[:, 0] ** 2 + offsets[:, 1] ** 2
        return squared ** (-0.5 * self.exponent)


def taylor_row(h: float, k: float) -> np.ndarray:
    """Вектор c = (h, k, h^2/2, k^2/2, h*k)"""
    return np.array([h, k, 0.5 * h * h, 0.5 * k * k, h * k])


def taylor_rows(offsets: np.ndarray) -> np.ndarray:
    """Матрица (s, 5) из векторов c_i"""
    h = offsets[:, 0]
    k = offsets[:, 1]
    return np.column_stack([h, k, 0.5 * h * h, 0.5 * k * k, h * k])


def assemble_normal_matrix(star: Star, weights: WeightScheme) -> np.ndarray:
    """A = Σ w_i^2 c_i c_i^T"""
    rows = taylor_rows(star.offsets)
    squared_weights = weights.weights(star.offsets) ** 2
    matrix = rows.T @ (squared_weights[:, None] * rows)
    return 0.5 * (matrix + matrix.T)


@dataclass(frozen=True, eq=False)
class StencilRow:
    """Коэффициенты λ одной звезды"""
    center: int
    neighbors: np.ndarray  # (s,)
    lambda_neighbors: np.ndarray  # (s, 5)
    lambda_center: np.ndarray  # (5,)
    condition_estimate: float

    @property
    def lambda_laplacian_center(self) -> float:
        return float(self.lambda_center[DXX] + self.lambda_center[DYY])

    @property
    def lambda_laplacian_neighbors(self) -> np.ndarray:
        return self.lambda_neighbors[:, DXX] + self.lambda_neighbors[:, DYY]

    def sample(self, field: np.ndarray) -> np.ndarray:
        """Значения поля в центре и соседях (центр первым)"""
        field = np.asarray(field, dtype=float)
        return np.concatenate([[field[self.center]], field[self.neighbors]])


def compute_stencil(star: Star, weights: WeightScheme) -> StencilRow:
    """Коэффициенты λ звезды через разложение Холецкого"""
    matrix = assemble_normal_matrix(star, weights)
    condition = float(np.linalg.cond(matrix))
    if not np.isfinite(condition) or condition > config.CONDITION_THRESHOLD:
        raise DegenerateStarError(star.center, f"число обусловленности {condition:.3e}")
    try:
        factor = cho_factor(matrix, lower=True)
    except LinAlgError as e:
        raise DegenerateStarError(star.center, f"разложение Холецкого не удалось ({e})") from e

    rows = taylor_rows(star.offsets)
    squared_weights = weights.weights(star.offsets) ** 2
    solved = cho_solve(factor, rows.T)  # (5, s): A^{-1} c_i по столбцам
    lam = (solved * squared_weights).T
    lam.setflags(write=False)
    lam0 = lam.sum(axis=0)
    lam0.setflags(write=False)
    return StencilRow(
        center=star.center,
        neighbors=star.neighbors,
        lambda_neighbors=lam,
        lambda_center=lam0,
        condition_estimate=condition,
    )


def apply_stencil(row: StencilRow, values: Sequence[float]) -> np.ndarray:
    """Оценки пяти производных по значениям в центре и соседях (центр первым)"""
    values = np.asarray(values, dtype=float)
    expected = len(row.neighbors) + 1
    if values.shape != (expected,):
        raise StencilMismatchError(f"ожидалось {expected} значений (центр и соседи), получено {values.shape}")
    return -row.lambda_center * values[0] + values[1:] @ row.lambda_neighbors


@dataclass(frozen=True, eq=False)
class StencilSet:
    """Коэффициенты всех звезд, уложенные в массивы"""
    centers: np.ndarray  # (n,)
    neighbors: np.ndarray  # (n, s)
    lam: np.ndarray  # (n, s, 5)
    lam0: np.ndarray  # (n, 5)
    condition: np.ndarray  # (n,)
    weights: WeightScheme

    def __len__(self) -> int:
        return len(self.centers)

    @property
    def star_size(self) -> int:
        return self.neighbors.shape[1]

    @property
    def laplacian_center(self) -> np.ndarray:
        """λ_00 по каждой звезде"""
        return self.lam0[:, DXX] + self.lam0[:, DYY]

    @property
    def laplacian_neighbors(self) -> np.ndarray:
        """λ_i0 по каждой звезде"""
        return self.lam[:, :, DXX] + self.lam[:, :, DYY]

    def row(self, position: int) -> StencilRow:
        return StencilRow(
            center=int(self.centers[position]),
            neighbors=self.neighbors[position],
            lambda_neighbors=self.lam[position],
            lambda_center=self.lam0[position],
            condition_estimate=float(self.condition[position]),
        )


def compute_all_stencils(stars: List[Star], weights: WeightScheme) -> StencilSet:
    """Коэффициенты для списка звезд одинакового размера"""
    if not stars:
        raise StencilMismatchError("список звезд пуст")
    sizes = {star.size for star in stars}
    if len(sizes) != 1:
        raise StencilMismatchError(f"звезды разного размера: {sorted(sizes)}")

    rows = [compute_stencil(star, weights) for star in stars]
    stencils = StencilSet(
        centers=np.array([row.center for row in rows], dtype=int),
        neighbors=np.stack([row.neighbors for row in rows]),
        lam=np.stack([row.lambda_neighbors for row in rows]),
        lam0=np.stack([row.lambda_center for row in rows]),
        condition=np.array([row.condition_estimate for row in rows]),
        weights=weights,
    )
    logger.info(
        f"Вычислены коэффициенты для {len(stencils)} звезд, "
        f"максимальное число обусловленности {stencils.condition.max():.3e}"
    )
    return stencils


def derivatives(stencils: StencilSet, values: np.ndarray) -> np.ndarray:
    """Оценки (n, 5) производных во всех центрах по полю на всем облаке"""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size <= max(stencils.neighbors.max(), stencils.centers.max()):
        raise StencilMismatchError(f"поле длины {values.shape} не покрывает узлы звезд")
    return (
        -stencils.lam0 * values[stencils.centers][:, None]
        + np.einsum("nsr,ns->nr", stencils.lam, values[stencils.neighbors])
    )


def laplacian(stencils: StencilSet, values: np.ndarray) -> np.ndarray:
    """Оценка лапласиана во всех центрах"""
    estimates = derivatives(stencils, values)
    return estimates[:, DXX] + estimates[:, DYY]


def dump_stencils(stencils: StencilSet, path: Union[str, Path]) -> None:
    """Отладочная выгрузка λ: center,neighbor,lam1..lam5"""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(config.STENCIL_DUMP_HEADER)
        for position, center in enumerate(stencils.centers):
            for neighbor, lam in zip(stencils.neighbors[position], stencils.lam[position]):
                writer.writerow([str(center), str(neighbor)] + [format_float(value) for value in lam])
    logger.info(f"Коэффициенты λ записаны в {path}")
