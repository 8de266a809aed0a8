"""Неявное уравнение -Δv + v = u с однородным условием Неймана"""
from dataclasses import dataclass
import logging
from pathlib import Path
from typing import Hashable, Optional, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

import config
from cloud.models import PointCloud
from errors import ConfigError, EllipticSolveError, StencilMismatchError
from gfd.stencil import DX, DY, StencilSet
from utils.cache import get_cached_factorization
from utils.helpers import format_float

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EllipticSystem:
    """Разреженная матрица системы и разбиение строк"""
    matrix: sp.csr_matrix
    inner_rows: np.ndarray
    boundary_rows: np.ndarray
    neumann: str
    paired: np.ndarray  # партнеры граничных узлов (-1 для внутренних)
    key: Optional[Hashable] = None  # ключ кэша факторизации

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def rhs(self, u: np.ndarray) -> np.ndarray:
        """Правая часть: U во внутренних строках, 0 в граничных"""
        u = np.asarray(u, dtype=float)
        if u.shape != (self.size,):
            raise StencilMismatchError(f"ожидалось поле длины {self.size}, получено {u.shape}")
        rhs = u.copy()
        rhs[self.boundary_rows] = 0.0
        return rhs


def assemble_elliptic(cloud: PointCloud, stencils: StencilSet,
                      neumann: str = config.DEFAULT_NEUMANN,
                      boundary_stencils: Optional[StencilSet] = None) -> EllipticSystem:
    """Сборка матрицы системы

    Внутренняя строка j: (1 + λ_00) V_j - Σ λ_i0 V_i.
    Граничная строка b: V_b - V_paired(b) (paired) либо n·∇V = 0 по звезде
    граничного узла (stencil).
    """
    if neumann not in config.NEUMANN_MODES:
        raise ConfigError(f"неизвестный режим условия Неймана '{neumann}'")
    if not np.array_equal(np.sort(stencils.centers), cloud.inner_indices):
        raise StencilMismatchError("нужен ровно один шаблон на каждый внутренний узел")

    m = cloud.size
    s = stencils.star_size
    rows = [np.repeat(stencils.centers, s + 1)]
    cols = [np.column_stack([stencils.centers, stencils.neighbors]).ravel()]
    vals = [np.column_stack([1.0 + stencils.laplacian_center, -stencils.laplacian_neighbors]).ravel()]

    boundary = cloud.boundary_indices
    if neumann == config.NEUMANN_PAIRED:
        rows.append(np.repeat(boundary, 2))
        cols.append(np.column_stack([boundary, cloud.paired[boundary]]).ravel())
        vals.append(np.tile([1.0, -1.0], boundary.size))
    else:
        if boundary_stencils is None:
            raise ConfigError("для режима stencil нужны шаблоны граничных узлов")
        if not np.array_equal(np.sort(boundary_stencils.centers), boundary):
            raise StencilMismatchError("нужен ровно один шаблон на каждый граничный узел")
        normals = cloud.normals[boundary_stencils.centers]
        center_weights = -(normals[:, 0] * boundary_stencils.lam0[:, DX]
                           + normals[:, 1] * boundary_stencils.lam0[:, DY])
        neighbor_weights = (normals[:, 0, None] * boundary_stencils.lam[:, :, DX]
                            + normals[:, 1, None] * boundary_stencils.lam[:, :, DY])
        sb = boundary_stencils.star_size
        rows.append(np.repeat(boundary_stencils.centers, sb + 1))
        cols.append(np.column_stack([boundary_stencils.centers, boundary_stencils.neighbors]).ravel())
        vals.append(np.column_stack([center_weights, neighbor_weights]).ravel())

    matrix = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(m, m),
    )
    matrix.sum_duplicates()
    matrix.sort_indices()

    key = (cloud.fingerprint(), s, float(stencils.weights.exponent), neumann)
    logger.info(f"Собрана эллиптическая система {m}x{m}, {matrix.nnz} ненулевых, условие Неймана: {neumann}")
    return EllipticSystem(
        matrix=matrix,
        inner_rows=cloud.inner_indices,
        boundary_rows=boundary,
        neumann=neumann,
        paired=cloud.paired,
        key=key,
    )


def solve_elliptic(system: EllipticSystem, u: np.ndarray) -> np.ndarray:
    """Решение системы с проверкой невязки"""
    rhs = system.rhs(u)
    if not np.all(np.isfinite(rhs)):
        raise EllipticSolveError("правая часть содержит нечисловые значения")

    try:
        lu = get_cached_factorization(system.key, lambda: splu(system.matrix.tocsc()))
    except RuntimeError as e:
        raise EllipticSolveError(f"матрица вырождена ({e})") from e

    v = lu.solve(rhs)
    residual = float(np.max(np.abs(system.matrix @ v - rhs))) if rhs.size else 0.0
    tolerance = config.RESIDUAL_TOLERANCE * (1.0 + float(np.max(np.abs(rhs))))
    if not np.isfinite(residual) or residual > tolerance:
        raise EllipticSolveError("эллиптическая система решена неточно", residual=residual)
    return v


def apply_neumann(system: EllipticSystem, values: np.ndarray) -> np.ndarray:
    """Граничные значения поля по условию Неймана при заданных внутренних"""
    values = np.array(values, dtype=float)
    boundary = system.boundary_rows
    if system.neumann == config.NEUMANN_PAIRED:
        values[boundary] = values[system.paired[boundary]]
        return values

    # n·∇U = 0 во всех граничных узлах: система на граничные значения
    block = system.matrix[boundary]
    boundary_block = block[:, boundary]
    inner_block = block[:, system.inner_rows]
    key = None if system.key is None else system.key + ("boundary",)
    try:
        lu = get_cached_factorization(key, lambda: splu(boundary_block.tocsc()))
    except RuntimeError as e:
        raise EllipticSolveError(f"граничный блок вырожден ({e})") from e
    values[boundary] = lu.solve(-(inner_block @ values[system.inner_rows]))
    return values


def dump_matrix(system: EllipticSystem, path: Union[str, Path]) -> None:
    """Выгрузка матрицы в координатном формате: row col value"""
    path = Path(path)
    coo = system.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for position in order:
            handle.write(f"{coo.row[position]} {coo.col[position]} {format_float(coo.data[position])}\n")
    logger.info(f"Матрица записана в {path}")
