"""Модели данных облака точек"""
from dataclasses import dataclass
from functools import cached_property
import hashlib
from typing import Optional, Tuple

import numpy as np

import config
from errors import CloudGeometryError
from utils.helpers import format_float


@dataclass(frozen=True)
class Node:
    """Узел облака"""
    index: int
    x: float
    y: float
    kind: str = config.NODE_INNER
    normal: Optional[Tuple[float, float]] = None  # только для граничных узлов
    paired_inner: Optional[int] = None  # внутренний партнер для условия Неймана

    def is_inner(self) -> bool:
        return self.kind == config.NODE_INNER

    def is_boundary(self) -> bool:
        return self.kind == config.NODE_BOUNDARY

    def to_row(self) -> list:
        """Преобразование в строку CSV"""
        if self.is_boundary():
            nx, ny = self.normal
            return [
                str(self.index),
                format_float(self.x),
                format_float(self.y),
                self.kind,
                format_float(nx),
                format_float(ny),
                str(self.paired_inner),
            ]
        return [str(self.index), format_float(self.x), format_float(self.y), self.kind, "", "", ""]

    @classmethod
    def from_row(cls, row: list) -> 'Node':
        """Создание из строки CSV

        Бросает ValueError при нарушении схемы.
        """
        if len(row) != len(config.CLOUD_HEADER):
            raise ValueError(f"ожидалось {len(config.CLOUD_HEADER)} полей, получено {len(row)}")
        index_str, x_str, y_str, kind, nx_str, ny_str, pair_str = [value.strip() for value in row]
        if kind not in config.NODE_KINDS:
            raise ValueError(f"неизвестный тип узла '{kind}'")

        if kind == config.NODE_INNER:
            if nx_str or ny_str or pair_str:
                raise ValueError("у внутреннего узла не должно быть нормали и партнера")
            return cls(index=int(index_str), x=float(x_str), y=float(y_str))

        if not nx_str or not ny_str:
            raise ValueError("у граничного узла нет нормали")
        if not pair_str:
            raise ValueError("у граничного узла нет внутреннего партнера")
        return cls(
            index=int(index_str),
            x=float(x_str),
            y=float(y_str),
            kind=kind,
            normal=(float(nx_str), float(ny_str)),
            paired_inner=int(pair_str),
        )


@dataclass(frozen=True)
class PointCloud:
    """Облако точек M = {z_1, ..., z_m}

    Неизменяемо после построения. Массивы numpy доступны только для чтения.
    """
    nodes: Tuple[Node, ...]
    domain: Tuple[float, float, float, float] = config.DEFAULT_DOMAIN

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def size(self) -> int:
        return len(self.nodes)

    @cached_property
    def coordinates(self) -> np.ndarray:
        coords = np.array([[node.x, node.y] for node in self.nodes], dtype=float).reshape(-1, 2)
        coords.setflags(write=False)
        return coords

    @cached_property
    def inner_mask(self) -> np.ndarray:
        mask = np.array([node.is_inner() for node in self.nodes], dtype=bool)
        mask.setflags(write=False)
        return mask

    @cached_property
    def inner_indices(self) -> np.ndarray:
        indices = np.flatnonzero(self.inner_mask)
        indices.setflags(write=False)
        return indices

    @cached_property
    def boundary_indices(self) -> np.ndarray:
        indices = np.flatnonzero(~self.inner_mask)
        indices.setflags(write=False)
        return indices

    @cached_property
    def normals(self) -> np.ndarray:
        normals = np.zeros((self.size, 2))
        for node in self.nodes:
            if node.is_boundary():
                normals[node.index] = node.normal
        normals.setflags(write=False)
        return normals

    @cached_property
    def paired(self) -> np.ndarray:
        """Внутренний партнер каждого узла (-1 для внутренних)"""
        paired = np.full(self.size, -1, dtype=int)
        for node in self.nodes:
            if node.is_boundary():
                paired[node.index] = node.paired_inner
        paired.setflags(write=False)
        return paired

    def fingerprint(self) -> str:
        """SHA-256 от координат, типов узлов и пар"""
        digest = hashlib.sha256()
        digest.update(np.ascontiguousarray(self.coordinates).tobytes())
        digest.update(self.inner_mask.tobytes())
        digest.update(np.ascontiguousarray(self.paired, dtype=np.int64).tobytes())
        digest.update(np.asarray(self.domain, dtype=float).tobytes())
        return digest.hexdigest()

    def validate(self) -> None:
        """Проверка инвариантов облака"""
        validate_domain(self.domain)
        for position, node in enumerate(self.nodes):
            if node.index != position:
                raise CloudGeometryError(f"индексы узлов должны идти подряд: позиция {position}, индекс {node.index}")
            if node.kind not in config.NODE_KINDS:
                raise CloudGeometryError(f"узел {node.index}: неизвестный тип '{node.kind}'")
            if node.is_boundary():
                _check_boundary_node(node, self)
            elif node.normal is not None or node.paired_inner is not None:
                raise CloudGeometryError(f"узел {node.index}: у внутреннего узла есть нормаль или партнер")

        x_min, x_max, y_min, y_max = self.domain
        coords = self.coordinates
        if self.size and (
            coords[:, 0].min() < x_min or coords[:, 0].max() > x_max
            or coords[:, 1].min() < y_min or coords[:, 1].max() > y_max
        ):
            raise CloudGeometryError("узлы выходят за пределы области")

        if not np.all(np.isfinite(coords)):
            raise CloudGeometryError("координаты узлов должны быть конечными")

        order = np.lexsort((coords[:, 1], coords[:, 0]))
        ordered = coords[order]
        duplicates = np.flatnonzero(np.all(ordered[1:] == ordered[:-1], axis=1))
        if duplicates.size:
            first, second = sorted(order[duplicates[0]:duplicates[0] + 2])
            raise CloudGeometryError(f"узлы {first} и {second} совпадают")


def validate_domain(domain: Tuple[float, float, float, float]) -> None:
    """Проверка прямоугольника области"""
    x_min, x_max, y_min, y_max = domain
    if not (x_max > x_min and y_max > y_min):
        raise CloudGeometryError(f"область {domain} имеет нулевую площадь")


def pairing_angle(boundary_xy: np.ndarray, normal: np.ndarray, inner_xy: np.ndarray) -> np.ndarray:
    """Угол между направлением на внутренний узел и внутренней нормалью"""
    direction = np.atleast_2d(inner_xy) - boundary_xy
    inward = -np.asarray(normal, dtype=float)
    cross = np.abs(direction[:, 0] * inward[1] - direction[:, 1] * inward[0])
    dot = direction @ inward
    return np.arctan2(cross, dot)


def _check_boundary_node(node: Node, cloud: PointCloud) -> None:
    if node.normal is None:
        raise CloudGeometryError(f"узел {node.index}: у граничного узла нет нормали")
    normal = np.asarray(node.normal, dtype=float)
    if abs(np.hypot(*normal) - 1.0) > config.NORMAL_TOLERANCE:
        raise CloudGeometryError(f"узел {node.index}: нормаль не единичная")

    pair = node.paired_inner
    if pair is None or not 0 <= pair < cloud.size or not cloud.nodes[pair].is_inner():
        raise CloudGeometryError(f"узел {node.index}: партнер {pair} не является внутренним узлом")

    partner = cloud.nodes[pair]
    angle = pairing_angle(np.array([node.x, node.y]), normal, np.array([partner.x, partner.y]))[0]
    # Угловые нормали на анизотропной сетке не совпадают ни с одним направлением сетки
    oblique = np.count_nonzero(normal) == 2
    limit = np.pi / 2 if oblique else config.PAIRING_ANGLE_TOLERANCE
    if not angle <= limit:
        raise CloudGeometryError(
            f"узел {node.index}: партнер {pair} отклонен от внутренней нормали на {angle:.3e} рад"
        )
