"""Оценка допустимого шага по времени

Для каждого внутреннего узла
    dt < (1 + C) / (C (A1' + A1'') + B1),   C = |1 - λ_00| + Σ|λ_i0|,
где A1 = |1 - dt A1'| + dt A1''. Непрерывное решение в коэффициентах
заменяется дискретным (u_0 + U_0 -> 2 U_0), а производные γ в промежуточной
точке ξ заменяются наибольшим модулем на концах [min V, max V] звезды.
"""
import csv
from dataclasses import dataclass
import logging
from pathlib import Path
from typing import Tuple, Union

import numpy as np

import config
from errors import ConfigError, StabilityBreakdownError, StencilMismatchError
from gfd.stencil import DX, DXX, DY, DYY, StencilSet, derivatives
from model.motility import MotilityFunction
from utils.helpers import format_value

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """Оценки шага по узлам"""
    nodes: np.ndarray  # индексы центров
    per_node_bound: np.ndarray
    a1_prime: np.ndarray
    a1_doubleprime: np.ndarray
    b1: np.ndarray
    laplacian_factor: str = config.LAPLACIAN_FACTOR_LITERAL

    @property
    def global_bound(self) -> float:
        return float(self.per_node_bound.min())

    @property
    def worst_node(self) -> int:
        return int(self.nodes[np.argmin(self.per_node_bound)])

    def satisfies(self, dt: float) -> bool:
        return dt < self.global_bound


@dataclass(frozen=True, eq=False)
class _Coefficients:
    a1_prime: np.ndarray
    a1_doubleprime: np.ndarray
    b1: np.ndarray


def _coefficients(state, stencils: StencilSet, gamma: MotilityFunction, mu: float,
                  laplacian_factor: str, positions: np.ndarray) -> _Coefficients:
    if laplacian_factor not in config.LAPLACIAN_FACTORS:
        raise ConfigError(f"неизвестный множитель лапласиана '{laplacian_factor}'")

    u = np.asarray(state.u, dtype=float)
    v = np.asarray(state.v, dtype=float)
    centers = stencils.centers[positions]
    neighbors = stencils.neighbors[positions]
    lam = stencils.lam[positions]

    du = derivatives(stencils, u)[positions]
    dv = derivatives(stencils, v)[positions]
    dxu, dyu, lhu = du[:, DX], du[:, DY], du[:, DXX] + du[:, DYY]
    dxv, dyv = dv[:, DX], dv[:, DY]

    u0 = u[centers]
    v0 = v[centers]
    g0, g1, g2, _ = gamma.derivatives(v0)

    lam00 = stencils.laplacian_center[positions]
    lam01 = stencils.lam0[positions, DX]
    lam02 = stencils.lam0[positions, DY]
    sum0 = (lam[:, :, DXX] + lam[:, :, DYY]).sum(axis=1)
    sum1 = lam[:, :, DX].sum(axis=1)
    sum2 = lam[:, :, DY].sum(axis=1)

    kappa = 1.0 if laplacian_factor == config.LAPLACIAN_FACTOR_LITERAL else g0
    gradient_v = dxv ** 2 + dyv ** 2

    # Скобка при dt, A1' = -скобка
    bracket = (
        -kappa * lam00
        - 2.0 * g1 * lam01 * dxv
        - 2.0 * g1 * lam02 * dyv
        + g2 * gradient_v
        + g1 * (v0 - u0)
        + mu
        - 2.0 * mu * u0
    )
    a1_prime = -bracket
    a1_doubleprime = (
        np.abs(g1 * sum0)
        + 2.0 * np.abs(g2 * dxv * sum1)
        + 2.0 * np.abs(g2 * dyv * sum2)
    )

    # Худший случай производных γ на [min V, max V] звезды
    star_values = np.column_stack([v0, v[neighbors]])
    ends = (star_values.min(axis=1), star_values.max(axis=1))
    _, low1, low2, low3 = gamma.derivatives(ends[0])
    _, high1, high2, high3 = gamma.derivatives(ends[1])
    xi1 = np.maximum(np.abs(low1), np.abs(high1))
    xi2 = np.maximum(np.abs(low2), np.abs(high2))
    xi3 = np.maximum(np.abs(low3), np.abs(high3))

    b1 = (
        xi1 * np.abs(lhu)
        + 2.0 * xi2 * np.abs(dxu * dxv)
        + 2.0 * xi2 * np.abs(dyu * dyv)
        + 2.0 * np.abs(g1 * dxu * lam01)
        + 2.0 * np.abs(g1 * dyu * lam02)
        + np.abs(u0) * xi3 * gradient_v
        + np.abs(u0 * g2 * 2.0 * dxv * lam01)
        + np.abs(u0 * g2 * 2.0 * dyv * lam02)
        + xi2 * np.abs(u0 * (v0 - u0))
        + 2.0 * np.abs(g1 * dxu * sum1)
        + 2.0 * np.abs(g1 * dyu * sum2)
        + np.abs(u0 * g2 * 2.0 * dxv * sum1)
        + np.abs(u0 * g2 * 2.0 * dyv * sum2)
    )
    return _Coefficients(a1_prime=a1_prime, a1_doubleprime=a1_doubleprime, b1=b1)


def _position(stencils: StencilSet, node: int) -> np.ndarray:
    positions = np.flatnonzero(stencils.centers == node)
    if positions.size == 0:
        raise StencilMismatchError(f"узел {node} не является центром звезды")
    return positions[:1]


def coefficient_A1(node: int, state, stencils: StencilSet, gamma: MotilityFunction, mu: float,
                   laplacian_factor: str = config.LAPLACIAN_FACTOR_LITERAL) -> Tuple[float, float]:
    """(A1', A1'') в узле"""
    coefficients = _coefficients(state, stencils, gamma, mu, laplacian_factor, _position(stencils, node))
    return float(coefficients.a1_prime[0]), float(coefficients.a1_doubleprime[0])


def coefficient_B1(node: int, state, stencils: StencilSet, gamma: MotilityFunction) -> float:
    """Коэффициент B1 при dt в узле"""
    # mu в B1 не входит
    coefficients = _coefficients(state, stencils, gamma, 1.0, config.LAPLACIAN_FACTOR_LITERAL,
                                 _position(stencils, node))
    return float(coefficients.b1[0])


def stencil_spread(stencils: StencilSet) -> np.ndarray:
    """C = |1 - λ_00| + Σ|λ_i0| по каждой звезде"""
    return np.abs(1.0 - stencils.laplacian_center) + np.abs(stencils.laplacian_neighbors).sum(axis=1)


def max_stable_dt(state, stencils: StencilSet, gamma: MotilityFunction, mu: float,
                  laplacian_factor: str = config.LAPLACIAN_FACTOR_LITERAL) -> StabilityReport:
    """Оценка шага во всех внутренних узлах"""
    positions = np.arange(len(stencils))
    coefficients = _coefficients(state, stencils, gamma, mu, laplacian_factor, positions)
    spread = stencil_spread(stencils)
    denominator = spread * (coefficients.a1_prime + coefficients.a1_doubleprime) + coefficients.b1

    bad = ~(denominator > 0)
    if np.any(bad):
        position = int(np.flatnonzero(bad)[0])
        raise StabilityBreakdownError(int(stencils.centers[position]), float(denominator[position]))

    report = StabilityReport(
        nodes=stencils.centers.copy(),
        per_node_bound=(1.0 + spread) / denominator,
        a1_prime=coefficients.a1_prime,
        a1_doubleprime=coefficients.a1_doubleprime,
        b1=coefficients.b1,
        laplacian_factor=laplacian_factor,
    )
    logger.info(f"Оценка шага: {report.global_bound:.6g} (узел {report.worst_node})")
    return report


def equilibrium_bound(stencils: StencilSet, gamma: MotilityFunction, mu: float,
                      laplacian_factor: str = config.LAPLACIAN_FACTOR_LITERAL) -> float:
    """Оценка шага в состоянии равновесия (1, 1) в замкнутой форме"""
    g0, g1, _, _ = gamma.derivatives(1.0)
    kappa = 1.0 if laplacian_factor == config.LAPLACIAN_FACTOR_LITERAL else float(g0)
    lam00 = stencils.laplacian_center
    spread = stencil_spread(stencils)
    bounds = (1.0 + spread) / (spread * (kappa * lam00 + mu + abs(float(g1)) * np.abs(lam00)))
    return float(bounds.min())


def write_stability_csv(report: StabilityReport, path: Union[str, Path]) -> None:
    """Оценки по узлам: node,bound,a1_prime,a1_doubleprime,b1"""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(config.STABILITY_CSV_HEADER)
        for row in zip(report.nodes, report.per_node_bound, report.a1_prime, report.a1_doubleprime, report.b1):
            writer.writerow([str(row[0])] + [format_value(value) for value in row[1:]])
    logger.info(f"Оценки шага по узлам записаны в {path}")
