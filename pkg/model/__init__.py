"""Модель подвижности модуль"""
