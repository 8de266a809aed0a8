"""Порядок сходимости на точных решениях"""
import logging
from typing import List, Sequence

import numpy as np

import config
from cloud.generators import generate_regular_cloud
from cloud.stars import build_all_boundary_stars, build_all_stars
from gfd.elliptic import assemble_elliptic, solve_elliptic
from gfd.stencil import WeightScheme, compute_all_stencils, laplacian

logger = logging.getLogger(__name__)


def manufactured_elliptic_error(n: int, neumann: str = config.DEFAULT_NEUMANN,
                                s: int = config.DEFAULT_STAR_SIZE,
                                alpha: float = config.DEFAULT_WEIGHT_EXPONENT) -> float:
    """Ошибка max|V - v| для v = cos(πx)cos(πy), u = (1 + 2π²) v на сетке n x n"""
    cloud = generate_regular_cloud(n, n)
    weights = WeightScheme(alpha)
    stencils = compute_all_stencils(build_all_stars(cloud, s), weights)
    boundary_stencils = None
    if neumann == config.NEUMANN_STENCIL:
        boundary_stencils = compute_all_stencils(build_all_boundary_stars(cloud, s), weights)
    system = assemble_elliptic(cloud, stencils, neumann, boundary_stencils)

    x, y = cloud.coordinates[:, 0], cloud.coordinates[:, 1]
    exact = np.cos(np.pi * x) * np.cos(np.pi * y)
    solved = solve_elliptic(system, (1.0 + 2.0 * np.pi ** 2) * exact)
    error = float(np.max(np.abs(solved - exact)))
    logger.info(f"Сетка {n}x{n}, условие Неймана {neumann}: ошибка {error:.4e}")
    return error


def laplacian_error(n: int, s: int = config.DEFAULT_STAR_SIZE,
                    alpha: float = config.DEFAULT_WEIGHT_EXPONENT) -> float:
    """Ошибка GFD-лапласиана sin(πx)sin(πy) во внутренних узлах сетки n x n"""
    cloud = generate_regular_cloud(n, n)
    stencils = compute_all_stencils(build_all_stars(cloud, s), WeightScheme(alpha))
    x, y = cloud.coordinates[:, 0], cloud.coordinates[:, 1]
    field = np.sin(np.pi * x) * np.sin(np.pi * y)
    exact = -2.0 * np.pi ** 2 * field[stencils.centers]
    return float(np.max(np.abs(laplacian(stencils, field) - exact)))


def observed_order(errors: Sequence[float], spacings: Sequence[float]) -> List[float]:
    """Наблюдаемые порядки log(e_i / e_{i+1}) / log(h_i / h_{i+1})"""
    if len(errors) != len(spacings):
        raise ValueError("число ошибок и шагов сетки должно совпадать")
    return [
        float(np.log(errors[i] / errors[i + 1]) / np.log(spacings[i] / spacings[i + 1]))
        for i in range(len(errors) - 1)
    ]
