"""Командная строка модуль"""
