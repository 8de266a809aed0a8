"""Общие фикстуры тестов"""
import numpy as np
import pytest

from cloud.generators import generate_irregular_cloud, generate_regular_cloud
from cloud.stars import Star, build_all_stars
from gfd.stencil import WeightScheme, compute_all_stencils
from utils.cache import invalidate_cache


@pytest.fixture(autouse=True)
def clean_cache():
    invalidate_cache()
    yield
    invalidate_cache()


@pytest.fixture(scope="session")
def grid5():
    return generate_regular_cloud(5, 5)


@pytest.fixture(scope="session")
def grid21():
    return generate_regular_cloud(21, 21)


@pytest.fixture(scope="session")
def irregular21():
    return generate_irregular_cloud(21, 21, 0.3, seed=1)


@pytest.fixture(scope="session")
def stencils21(grid21):
    return compute_all_stencils(build_all_stars(grid21, 8), WeightScheme())


def random_star(rng, s, r_min=0.5, r_max=1.5):
    """Звезда со случайными смещениями в кольце r_min <= r <= r_max"""
    radius = rng.uniform(r_min, r_max, s)
    angle = rng.uniform(0.0, 2.0 * np.pi, s)
    offsets = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    return Star(center=0, neighbors=np.arange(1, s + 1), offsets=offsets)
