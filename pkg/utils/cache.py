"""Кэш факторизаций эллиптической системы"""
from collections import OrderedDict
from datetime import datetime
from typing import Callable, Hashable, Optional
import threading
import logging

logger = logging.getLogger(__name__)

# Глобальный кэш
_cache_lock = threading.Lock()
_factorizations: "OrderedDict[Hashable, object]" = OrderedDict()
_cache_timestamp: Optional[datetime] = None
_hits = 0
_misses = 0

# Максимальное число хранимых факторизаций
CACHE_MAX_ENTRIES = 8


def get_cached_factorization(key: Optional[Hashable], factorize: Callable[[], object]) -> object:
    """Получение факторизации из кэша или построение новой

    key = None отключает кэширование.
    """
    global _cache_timestamp, _hits, _misses

    if key is None:
        return factorize()

    with _cache_lock:
        if key in _factorizations:
            _factorizations.move_to_end(key)
            _hits += 1
            return _factorizations[key]

        _misses += 1
        factorization = factorize()
        _factorizations[key] = factorization
        _cache_timestamp = datetime.now()

        # Вытесняем самую старую запись
        while len(_factorizations) > CACHE_MAX_ENTRIES:
            evicted, _ = _factorizations.popitem(last=False)
            logger.debug(f"Факторизация {evicted!r} вытеснена из кэша")

        logger.info(f"Факторизация добавлена в кэш (записей: {len(_factorizations)})")
        return factorization


def cache_info() -> dict:
    """Статистика кэша"""
    with _cache_lock:
        return {
            "entries": len(_factorizations),
            "hits": _hits,
            "misses": _misses,
            "updated": _cache_timestamp,
        }


def invalidate_cache():
    """Инвалидация кэша (факторизации будут построены заново)"""
    global _cache_timestamp, _hits, _misses

    with _cache_lock:
        _factorizations.clear()
        _cache_timestamp = None
        _hits = 0
        _misses = 0
        logger.info("Кэш инвалидирован")
