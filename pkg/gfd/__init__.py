"""Шаблоны GFD модуль"""
