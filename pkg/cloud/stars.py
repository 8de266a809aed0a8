"""Построение E_s-звезд"""
from dataclasses import dataclass
import logging
from typing import List, Optional

import numpy as np
from scipy.spatial import cKDTree

import config
from cloud.models import PointCloud
from errors import CloudGeometryError, StarSizeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Star:
    """Звезда: центр, s ближайших узлов и смещения (h_i, k_i)"""
    center: int
    neighbors: np.ndarray  # (s,)
    offsets: np.ndarray  # (s, 2)

    @property
    def size(self) -> int:
        return len(self.neighbors)

    @property
    def distances(self) -> np.ndarray:
        return np.hypot(self.offsets[:, 0], self.offsets[:, 1])


def build_star(cloud: PointCloud, center: int, s: int = config.DEFAULT_STAR_SIZE,
               tree: Optional[cKDTree] = None) -> Star:
    """Звезда вокруг внутреннего узла"""
    _check_center(cloud, center, inner=True)
    return _select_star(cloud, center, s, tree)


def build_boundary_star(cloud: PointCloud, center: int, s: int = config.DEFAULT_STAR_SIZE,
                        tree: Optional[cKDTree] = None) -> Star:
    """Звезда вокруг граничного узла (для условия Неймана по шаблону)"""
    _check_center(cloud, center, inner=False)
    return _select_star(cloud, center, s, tree)


def build_all_stars(cloud: PointCloud, s: int = config.DEFAULT_STAR_SIZE) -> List[Star]:
    """Звезды всех внутренних узлов в порядке inner_indices"""
    _check_size(cloud, s)
    tree = cKDTree(cloud.coordinates)
    stars = [_select_star(cloud, int(center), s, tree) for center in cloud.inner_indices]
    logger.info(f"Построено {len(stars)} звезд (s = {s})")
    return stars


def build_all_boundary_stars(cloud: PointCloud, s: int = config.DEFAULT_STAR_SIZE) -> List[Star]:
    """Звезды всех граничных узлов в порядке boundary_indices"""
    _check_size(cloud, s)
    tree = cKDTree(cloud.coordinates)
    return [_select_star(cloud, int(center), s, tree) for center in cloud.boundary_indices]


def _check_size(cloud: PointCloud, s: int) -> None:
    if s < config.MIN_STAR_SIZE:
        raise StarSizeError(f"размер звезды должен быть не меньше {config.MIN_STAR_SIZE}, получено {s}")
    if cloud.size < s + 1:
        raise StarSizeError(f"в облаке {cloud.size} узлов, для звезды s = {s} нужно не меньше {s + 1}")


def _check_center(cloud: PointCloud, center: int, inner: bool) -> None:
    if not 0 <= center < cloud.size:
        raise CloudGeometryError(f"узел {center} отсутствует в облаке")
    if cloud.nodes[center].is_inner() != inner:
        expected = "внутренним" if inner else "граничным"
        raise CloudGeometryError(f"центр звезды {center} должен быть {expected} узлом")


def _select_star(cloud: PointCloud, center: int, s: int, tree: Optional[cKDTree]) -> Star:
    _check_size(cloud, s)
    coords = cloud.coordinates

    k = s + 1 + config.STAR_SEARCH_MARGIN
    if tree is not None and k < cloud.size:
        _, candidates = tree.query(coords[center], k=k)
        candidates = np.asarray(candidates, dtype=int)
        chosen, squared = _nearest(coords, center, candidates, s)
        # Узлы вне кандидатов не ближе самого дальнего кандидата
        candidate_squared = _squared_distances(coords, center, candidates)
        if squared[-1] < candidate_squared.max() * (1.0 - 1e-9):
            return _make_star(coords, center, chosen)
        logger.debug(f"Неоднозначная граница звезды узла {center}, полный перебор")

    chosen, _ = _nearest(coords, center, np.arange(cloud.size), s)
    return _make_star(coords, center, chosen)


def _squared_distances(coords: np.ndarray, center: int, indices: np.ndarray) -> np.ndarray:
    delta = coords[indices] - coords[center]
    return delta[:, 0] * delta[:, 0] + delta[:, 1] * delta[:, 1]


def _nearest(coords: np.ndarray, center: int, candidates: np.ndarray, s: int):
    candidates = candidates[candidates != center]
    squared = _squared_distances(coords, center, candidates)
    order = np.lexsort((candidates, squared))[:s]
    return candidates[order], squared[order]


def _make_star(coords: np.ndarray, center: int, neighbors: np.ndarray) -> Star:
    neighbors = np.array(neighbors, dtype=int)
    offsets = coords[neighbors] - coords[center]
    neighbors.setflags(write=False)
    offsets.setflags(write=False)
    return Star(center=center, neighbors=neighbors, offsets=offsets)
