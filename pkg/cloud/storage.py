"""Чтение и запись облака точек в CSV"""
import csv
import logging
from pathlib import Path
from typing import Dict, Union

import config
from cloud.models import Node, PointCloud
from errors import CloudFormatError, CloudGeometryError

logger = logging.getLogger(__name__)


def save_cloud(cloud: PointCloud, path: Union[str, Path]) -> None:
    """Запись облака: заголовок и одна строка на узел"""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(config.CLOUD_HEADER)
        for node in cloud.nodes:
            writer.writerow(node.to_row())
    logger.info(f"Облако из {cloud.size} узлов записано в {path}")


def load_cloud(path: Union[str, Path]) -> PointCloud:
    """Чтение облака из CSV

    Область восстанавливается как ограничивающий прямоугольник узлов.
    """
    path = Path(path)
    nodes: Dict[int, Node] = {}
    lines: Dict[int, int] = {}

    with path.open("r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [value.strip() for value in header] != config.CLOUD_HEADER:
            raise CloudFormatError(f"ожидался заголовок {','.join(config.CLOUD_HEADER)}", line=1)

        for row in reader:
            line = reader.line_num
            if not row:
                continue
            try:
                node = Node.from_row(row)
            except ValueError as e:
                raise CloudFormatError(str(e), line=line) from e
            if node.index in nodes:
                raise CloudFormatError(f"повторный индекс {node.index}", line=line)
            nodes[node.index] = node
            lines[node.index] = line

    if not nodes:
        raise CloudFormatError("файл не содержит узлов", line=1)

    missing = sorted(set(range(len(nodes))) - set(nodes))
    if missing:
        raise CloudFormatError(f"пропущен индекс {missing[0]}")

    for index, node in nodes.items():
        if node.is_boundary():
            partner = nodes.get(node.paired_inner)
            if partner is None or not partner.is_inner():
                raise CloudFormatError(
                    f"партнер {node.paired_inner} узла {index} не является внутренним узлом",
                    line=lines[index],
                )

    ordered = tuple(nodes[index] for index in range(len(nodes)))
    xs = [node.x for node in ordered]
    ys = [node.y for node in ordered]
    cloud = PointCloud(nodes=ordered, domain=(min(xs), max(xs), min(ys), max(ys)))
    try:
        cloud.validate()
    except CloudGeometryError as e:
        raise CloudFormatError(str(e)) from e

    logger.info(f"Загружено облако из {cloud.size} узлов из {path}")
    return cloud
