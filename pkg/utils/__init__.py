"""Утилиты"""

