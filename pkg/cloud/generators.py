"""Генерация облаков точек"""
import logging
from typing import Tuple

import numpy as np
from scipy.spatial import cKDTree

import config
from cloud.models import Node, PointCloud, pairing_angle, validate_domain
from errors import CloudGeometryError, ConfigError

logger = logging.getLogger(__name__)


def generate_regular_cloud(nx: int, ny: int,
                           domain: Tuple[float, float, float, float] = config.DEFAULT_DOMAIN) -> PointCloud:
    """Регулярная сетка nx x ny

    Узлы нумеруются построчно: index = j * nx + i. Узлы периметра граничные,
    нормали внешние по осям, в углах нормированная сумма нормалей сторон.
    """
    coords, inner_mask, normals = _grid_layout(nx, ny, domain)
    cloud = _build_cloud(coords, inner_mask, normals, domain)
    logger.info(f"Сгенерирована регулярная сетка {nx}x{ny}: {cloud.size} узлов")
    return cloud


def generate_irregular_cloud(nx: int, ny: int, perturbation: float, seed: int,
                             domain: Tuple[float, float, float, float] = config.DEFAULT_DOMAIN) -> PointCloud:
    """Регулярная сетка со сдвинутыми внутренними узлами

    Сдвиг равномерный в [-p*h, p*h] по каждой оси. Первый внутренний слой у
    стороны сдвигается только вдоль нормали этой стороны, узлы у углов не
    сдвигаются: партнер каждого граничного узла остается на его нормали.
    """
    if not 0.0 <= perturbation < config.MAX_PERTURBATION:
        raise ConfigError(f"возмущение должно лежать в [0, {config.MAX_PERTURBATION}), получено {perturbation}")

    coords, inner_mask, normals = _grid_layout(nx, ny, domain)
    if perturbation > 0.0:
        x_min, x_max, y_min, y_max = domain
        spacing = np.array([(x_max - x_min) / (nx - 1), (y_max - y_min) / (ny - 1)])

        rng = np.random.default_rng(seed)
        offsets = rng.uniform(-1.0, 1.0, size=(ny, nx, 2)) * perturbation * spacing

        j, i = np.meshgrid(np.arange(ny), np.arange(nx), indexing="ij")
        near_vertical_edge = (i == 1) | (i == nx - 2)
        near_horizontal_edge = (j == 1) | (j == ny - 2)
        offsets[..., 1][near_vertical_edge] = 0.0
        offsets[..., 0][near_horizontal_edge] = 0.0

        offsets = offsets.reshape(-1, 2)
        offsets[~inner_mask] = 0.0
        coords = coords + offsets

    cloud = _build_cloud(coords, inner_mask, normals, domain)
    logger.info(
        f"Сгенерировано нерегулярное облако {nx}x{ny} (возмущение {perturbation}, seed {seed}): {cloud.size} узлов"
    )
    return cloud


def pair_boundary_nodes(coords: np.ndarray, inner_mask: np.ndarray, normals: np.ndarray) -> np.ndarray:
    """Выбор внутреннего партнера для каждого граничного узла

    Среди ближайших внутренних узлов берется узел с минимальным отклонением от
    внутренней нормали, при равенстве ближайший, затем с меньшим индексом.
    Возвращает массив длины m, -1 для внутренних узлов.
    """
    coords = np.asarray(coords, dtype=float)
    inner = np.flatnonzero(inner_mask)
    if inner.size == 0:
        raise CloudGeometryError("в облаке нет внутренних узлов для условия Неймана")

    tree = cKDTree(coords[inner])
    k = min(config.PAIRING_CANDIDATES, inner.size)
    paired = np.full(len(coords), -1, dtype=int)

    for b in np.flatnonzero(~np.asarray(inner_mask, dtype=bool)):
        _, positions = tree.query(coords[b], k=k)
        candidates = inner[np.atleast_1d(positions)]
        angles = pairing_angle(coords[b], normals[b], coords[candidates])
        tied = angles <= angles.min() + config.PAIRING_ANGLE_TOLERANCE
        candidates = candidates[tied]
        distances = np.hypot(*(coords[candidates] - coords[b]).T)
        paired[b] = candidates[np.lexsort((candidates, distances))[0]]

    return paired


def _grid_layout(nx: int, ny: int, domain: Tuple[float, float, float, float]):
    if nx < config.MIN_GRID_SIZE or ny < config.MIN_GRID_SIZE:
        raise ConfigError(f"сетка должна быть не меньше {config.MIN_GRID_SIZE}x{config.MIN_GRID_SIZE}, получено {nx}x{ny}")
    validate_domain(domain)

    x_min, x_max, y_min, y_max = domain
    xs = np.linspace(x_min, x_max, nx)
    ys = np.linspace(y_min, y_max, ny)
    gx, gy = np.meshgrid(xs, ys)
    coords = np.column_stack([gx.ravel(), gy.ravel()])

    j, i = np.meshgrid(np.arange(ny), np.arange(nx), indexing="ij")
    i, j = i.ravel(), j.ravel()

    normals = np.zeros((nx * ny, 2))
    normals[i == 0, 0] -= 1.0
    normals[i == nx - 1, 0] += 1.0
    normals[j == 0, 1] -= 1.0
    normals[j == ny - 1, 1] += 1.0

    inner_mask = ~np.any(normals != 0.0, axis=1)
    lengths = np.hypot(normals[:, 0], normals[:, 1])
    normals[~inner_mask] /= lengths[~inner_mask, None]
    return coords, inner_mask, normals


def _build_cloud(coords: np.ndarray, inner_mask: np.ndarray, normals: np.ndarray,
                 domain: Tuple[float, float, float, float]) -> PointCloud:
    paired = pair_boundary_nodes(coords, inner_mask, normals)
    nodes = []
    for index, (x, y) in enumerate(coords):
        if inner_mask[index]:
            nodes.append(Node(index=index, x=float(x), y=float(y)))
        else:
            nodes.append(Node(
                index=index,
                x=float(x),
                y=float(y),
                kind=config.NODE_BOUNDARY,
                normal=(float(normals[index, 0]), float(normals[index, 1])),
                paired_inner=int(paired[index]),
            ))
    cloud = PointCloud(nodes=tuple(nodes), domain=tuple(float(v) for v in domain))
    cloud.validate()
    return cloud
