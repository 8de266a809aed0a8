"""Вспомогательные функции"""
from pathlib import Path
from typing import List, Tuple, Union

import config


def format_float(value: float) -> str:
    """Форматирование числа с 17 значащими цифрами (обратимо)"""
    return format(float(value), config.COORDINATE_FORMAT)


def format_value(value: float) -> str:
    """Кратчайшая обратимая запись числа"""
    return repr(float(value))


def format_time(t: float) -> str:
    """Форматирование момента времени для имени файла"""
    return format(float(t), "g")


def format_norm(value: float) -> str:
    """Форматирование нормы для таблицы отчета"""
    return f"{value:.4e}"


def snapshot_filename(t: float) -> str:
    """Имя файла снимка для момента t"""
    return config.SNAPSHOT_PATTERN.format(time=format_time(t))


def parse_grid(text: str) -> Tuple[int, int]:
    """Разбор размера сетки вида 21x21"""
    parts = text.lower().replace("×", "x").split("x")
    if len(parts) != 2:
        raise ValueError(f"ожидался формат NXxNY, получено '{text}'")
    nx, ny = (int(part.strip()) for part in parts)
    return nx, ny


def parse_times(text: str) -> List[float]:
    """Разбор списка моментов времени через запятую"""
    return sorted(float(part) for part in text.split(",") if part.strip())


def ensure_directory(path: Union[str, Path]) -> Path:
    """Создание каталога результатов, если его нет"""
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)
    return directory
