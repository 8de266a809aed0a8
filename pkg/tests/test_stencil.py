import numpy as np
import pytest

from conftest import random_star
import config
from cloud.generators import generate_regular_cloud
from cloud.stars import Star, build_all_stars
from errors import ConfigError, DegenerateStarError, StencilMismatchError
from gfd.stencil import (
    DX, DXX, DXY, DY, DYY,
    WeightScheme, apply_stencil, assemble_normal_matrix, compute_all_stencils,
    compute_stencil, derivatives, dump_stencils, laplacian, taylor_row, taylor_rows,
)

H = 0.05


def quadratic(x, y):
    return 1.0 + 2.5 * x - 0.5 * y + x * x - 2.0 * y * y + 3.0 * x * y


QUADRATIC_DERIVATIVES = np.array([2.5, -0.5, 2.0, -4.0, 3.0])


def test_taylor_row():
    assert np.array_equal(taylor_row(2.0, -1.0), [2.0, -1.0, 2.0, 0.5, -2.0])
    assert np.array_equal(taylor_row(0.0, 0.0), np.zeros(5))
    offsets = np.array([[2.0, -1.0], [0.5, 0.5]])
    assert np.array_equal(taylor_rows(offsets)[0], taylor_row(2.0, -1.0))


def test_weights():
    scheme = WeightScheme()
    assert scheme.weights(np.array([[0.5, 0.0], [0.0, 2.0]])) == pytest.approx([4.0, 0.25])
    assert WeightScheme(3.0).weights(np.array([[2.0, 0.0]])) == pytest.approx([0.125])


@pytest.mark.parametrize("exponent", [0.0, -1.0])
def test_weight_exponent_must_be_positive(exponent):
    with pytest.raises(ConfigError):
        WeightScheme(exponent)


def test_normal_matrix_matches_sum():
    star = random_star(np.random.default_rng(3), 8)
    scheme = WeightScheme()
    expected = sum(
        w * w * np.outer(taylor_row(*offset), taylor_row(*offset))
        for w, offset in zip(scheme.weights(star.offsets), star.offsets)
    )
    matrix = assemble_normal_matrix(star, scheme)
    assert np.allclose(matrix, expected, rtol=1e-12, atol=0)
    assert np.array_equal(matrix, matrix.T)


def test_axis_only_star_is_degenerate():
    offsets = np.array([[1, 0], [-1, 0], [0, 1], [0, -1], [2, 0], [-2, 0], [0, 2], [0, -2]], dtype=float)
    star = Star(center=0, neighbors=np.arange(1, 9), offsets=offsets)
    with pytest.raises(DegenerateStarError) as info:
        compute_stencil(star, WeightScheme())
    assert info.value.center == 0


def test_moore_star_coefficients(grid21, stencils21):
    position = list(stencils21.centers).index(10 * 21 + 10)
    row = stencils21.row(position)
    offsets = grid21.coordinates[row.neighbors] - grid21.coordinates[row.center]
    steps = np.rint(offsets / H).astype(int)
    axis = np.count_nonzero(steps, axis=1) == 1

    assert row.lambda_laplacian_center == pytest.approx(3.0 / H ** 2, rel=1e-9)
    assert row.lambda_laplacian_neighbors[axis] == pytest.approx(np.full(4, 0.5 / H ** 2), rel=1e-9)
    assert row.lambda_laplacian_neighbors[~axis] == pytest.approx(np.full(4, 0.25 / H ** 2), rel=1e-9)
    assert row.lambda_center[DX] == pytest.approx(0.0, abs=1e-9)
    assert row.lambda_center[DY] == pytest.approx(0.0, abs=1e-9)
    expected_dx = np.where(axis, 1.0 / (3.0 * H), 1.0 / (12.0 * H)) * steps[:, 0]
    assert row.lambda_neighbors[:, DX] == pytest.approx(expected_dx, rel=1e-9, abs=1e-9)


def test_laplacian_center_is_uniform_on_grid(stencils21):
    assert stencils21.laplacian_center == pytest.approx(np.full(len(stencils21), 1200.0), rel=1e-9)
    assert stencils21.star_size == 8


def random_quadratic(rng):
    """Коэффициенты (a0, ax, ay, axx, ayy, axy) и точные производные (ux, uy, uxx, uyy, uxy)"""
    a = rng.uniform(-5.0, 5.0, 6)
    exact = np.array([a[1], a[2], 2.0 * a[3], 2.0 * a[4], a[5]])
    return a, exact


def evaluate_quadratic(a, x, y):
    return a[0] + a[1] * x + a[2] * y + a[3] * x * x + a[4] * y * y + a[5] * x * y


@pytest.mark.parametrize("s", [6, 8, 12])
def test_random_quadratics_reproduced_exactly(s):
    rng = np.random.default_rng(s)
    stars = [random_star(rng, s) for _ in range(50)]
    rows = [compute_stencil(star, WeightScheme()) for star in stars]
    for _ in range(20):
        a, exact = random_quadratic(rng)
        tolerance = 1e-8 * max(1.0, np.abs(a).max())
        for star, row in zip(stars, rows):
            values = np.concatenate([[a[0]], evaluate_quadratic(a, star.offsets[:, 0], star.offsets[:, 1])])
            assert np.allclose(apply_stencil(row, values), exact, rtol=0, atol=tolerance)


@pytest.mark.parametrize("s", [8, 12])
def test_matches_dense_weighted_least_squares(s):
    rng = np.random.default_rng(100 + s)
    scheme = WeightScheme()
    for _ in range(100):
        star = random_star(rng, s)
        row = compute_stencil(star, scheme)
        weights = np.diag(scheme.weights(star.offsets))
        expected = (np.linalg.pinv(weights @ taylor_rows(star.offsets)) @ weights).T
        assert np.allclose(row.lambda_neighbors, expected, rtol=1e-10, atol=1e-10)
        assert np.allclose(row.lambda_center, expected.sum(axis=0), rtol=1e-10, atol=1e-10)


def test_scale_covariance():
    star = random_star(np.random.default_rng(9), 8)
    scaled = Star(center=0, neighbors=star.neighbors, offsets=star.offsets * 0.01)
    scheme = WeightScheme()
    base = compute_stencil(star, scheme).lambda_neighbors
    small = compute_stencil(scaled, scheme).lambda_neighbors
    assert np.allclose(small[:, [DX, DY]], base[:, [DX, DY]] / 0.01, rtol=1e-8)
    assert np.allclose(small[:, [DXX, DYY, DXY]], base[:, [DXX, DYY, DXY]] / 0.01 ** 2, rtol=1e-8)


def test_constant_and_linear_fields(stencils21, grid21):
    x, y = grid21.coordinates.T
    assert np.allclose(derivatives(stencils21, np.ones(grid21.size)), 0.0, atol=1e-9)
    estimates = derivatives(stencils21, 2.0 * x + y)
    assert np.allclose(estimates, [2.0, 1.0, 0.0, 0.0, 0.0], atol=1e-9)


def test_quadratics_on_irregular_cloud(irregular21):
    stencils = compute_all_stencils(build_all_stars(irregular21, 8), WeightScheme())
    x, y = irregular21.coordinates.T
    estimates = derivatives(stencils, quadratic(x, y))
    assert estimates.shape == (len(irregular21.inner_indices), 5)
    assert np.allclose(estimates, QUADRATIC_DERIVATIVES, rtol=0, atol=1e-8 * 3.0)

    rng = np.random.default_rng(21)
    for _ in range(20):
        a, exact = random_quadratic(rng)
        estimates = derivatives(stencils, evaluate_quadratic(a, x, y))
        assert np.allclose(estimates, exact, rtol=0, atol=1e-8 * max(1.0, np.abs(a).max()))


def test_laplacian_of_sine_converges():
    errors = []
    for n in (21, 41):
        cloud = generate_regular_cloud(n, n)
        stencils = compute_all_stencils(build_all_stars(cloud, 8), WeightScheme())
        x, y = cloud.coordinates.T
        u = np.sin(np.pi * x) * np.sin(np.pi * y)
        exact = -2.0 * np.pi ** 2 * u[stencils.centers]
        errors.append(np.abs(laplacian(stencils, u) - exact).max())
    assert errors[0] / errors[1] > 3.0


def test_apply_stencil_length_mismatch(stencils21):
    row = stencils21.row(0)
    with pytest.raises(StencilMismatchError):
        apply_stencil(row, np.zeros(8))
    assert apply_stencil(row, np.ones(9)) == pytest.approx(np.zeros(5), abs=1e-9)


def test_sample_puts_center_first(grid21, stencils21):
    row = stencils21.row(3)
    field = np.arange(grid21.size, dtype=float)
    sampled = row.sample(field)
    assert sampled[0] == row.center
    assert list(sampled[1:]) == list(row.neighbors)


def test_mixed_star_sizes_rejected(grid21):
    stars = build_all_stars(grid21, 8)[:2] + build_all_stars(grid21, 10)[:2]
    with pytest.raises(StencilMismatchError):
        compute_all_stencils(stars, WeightScheme())
    with pytest.raises(StencilMismatchError):
        compute_all_stencils([], WeightScheme())


def test_field_too_short(stencils21):
    with pytest.raises(StencilMismatchError):
        derivatives(stencils21, np.zeros(10))


def test_dump_stencils(tmp_path, grid5):
    stencils = compute_all_stencils(build_all_stars(grid5, 8), WeightScheme())
    path = tmp_path / "lambda.csv"
    dump_stencils(stencils, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(config.STENCIL_DUMP_HEADER)
    assert len(lines) == 1 + 9 * 8
    center, neighbor, *values = lines[1].split(",")
    assert int(center) == stencils.centers[0]
    assert int(neighbor) == stencils.neighbors[0, 0]
    assert np.allclose([float(value) for value in values], stencils.lam[0, 0], rtol=0, atol=0)
