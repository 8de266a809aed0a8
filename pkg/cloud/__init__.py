"""Облако точек модуль"""
