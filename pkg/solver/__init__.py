"""Решатель модуль"""
