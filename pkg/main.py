"""Точка входа приложения"""
import logging
import sys

from cli.handlers import dispatch
import config

# Настройка логирования
logging.basicConfig(
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    level=getattr(logging, config.LOG_LEVEL.upper(), logging.INFO)
)
logger = logging.getLogger(__name__)


def main():
    """Основная функция"""
    try:
        return dispatch()
    except Exception as e:
        logger.error(f"Непредвиденная ошибка: {e}")
        return config.EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
