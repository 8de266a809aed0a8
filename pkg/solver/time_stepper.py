"""Явно-неявная схема по времени

U продвигается явным шагом Эйлера с GFD-производными во внутренних узлах,
граничные значения U восстанавливаются по условию Неймана, затем V находится
из неявного эллиптического уравнения.
"""
import csv
from dataclasses import dataclass, field
import logging
import math
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

import config
from cloud.models import PointCloud
from cloud.stars import build_all_boundary_stars, build_all_stars
from errors import (
    ConfigError,
    DivergenceError,
    HypothesisError,
    MotilityDomainError,
    StabilityBreakdownError,
    StabilityViolationError,
    StencilMismatchError,
)
from gfd.elliptic import EllipticSystem, apply_neumann, assemble_elliptic, solve_elliptic
from gfd.stencil import DX, DXX, DY, DYY, StencilSet, WeightScheme, apply_stencil, compute_all_stencils, derivatives
from model.motility import ModelParameters, MotilityFunction
from model.validators import (
    validate_hypotheses,
    validate_initial_condition,
    validate_snapshot_times,
    validate_time_step,
)
from solver.stability import StabilityReport, max_stable_dt
from utils.helpers import format_value

logger = logging.getLogger(__name__)

InitialCondition = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class FieldState:
    """U и V на всех узлах в момент time"""
    u: np.ndarray
    v: np.ndarray
    time: float = 0.0
    step: int = 0


@dataclass
class SimulationConfig:
    """Параметры расчета"""
    gamma: MotilityFunction
    params: ModelParameters
    dt: float = config.DEFAULT_DT
    t_final: float = config.DEFAULT_T_FINAL
    s: int = config.DEFAULT_STAR_SIZE
    weights: WeightScheme = field(default_factory=WeightScheme)
    snapshot_times: List[float] = field(default_factory=list)
    enforce_stability_bound: bool = False
    neumann: str = config.DEFAULT_NEUMANN
    laplacian_factor: str = config.LAPLACIAN_FACTOR_LITERAL
    stability_every: int = config.DEFAULT_STABILITY_EVERY
    strict_hypotheses: bool = True

    def __post_init__(self):
        if not validate_time_step(self.dt, self.t_final):
            raise ConfigError(f"нужно 0 < dt <= t_final, получено dt = {self.dt}, t_final = {self.t_final}")
        self.snapshot_times = [float(t) for t in self.snapshot_times]
        if not validate_snapshot_times(self.snapshot_times, self.t_final):
            raise ConfigError(f"моменты снимков должны быть отсортированы и лежать в [0, {self.t_final}]")
        if self.neumann not in config.NEUMANN_MODES:
            raise ConfigError(f"неизвестный режим условия Неймана '{self.neumann}'")
        if self.laplacian_factor not in config.LAPLACIAN_FACTORS:
            raise ConfigError(f"неизвестный множитель лапласиана '{self.laplacian_factor}'")
        if self.stability_every < 0:
            raise ConfigError("stability_every не может быть отрицательным")

    @property
    def n_steps(self) -> int:
        return int(math.ceil(self.t_final / self.dt - 1e-9))


@dataclass(eq=False)
class Discretization:
    """Звезды, коэффициенты и эллиптическая система одного облака"""
    cloud: PointCloud
    stencils: StencilSet
    system: EllipticSystem
    boundary_stencils: Optional[StencilSet] = None


@dataclass(eq=False)
class SimulationResult:
    """Ряды норм, снимки и отчеты об устойчивости"""
    times: List[float] = field(default_factory=list)
    norm_u: List[float] = field(default_factory=list)
    norm_v: List[float] = field(default_factory=list)
    snapshots: Dict[float, FieldState] = field(default_factory=dict)
    stability_reports: List[StabilityReport] = field(default_factory=list)
    final_state: Optional[FieldState] = None
    dt: float = config.DEFAULT_DT

    def record(self, state: FieldState) -> None:
        norm_u, norm_v = norms(state)
        self.times.append(state.time)
        self.norm_u.append(norm_u)
        self.norm_v.append(norm_v)

    def norms_at(self, t: float) -> Tuple[float, float]:
        """Нормы на шаге, ближайшем к моменту t"""
        position = int(round(t / self.dt))
        if not 0 <= position < len(self.times):
            raise ValueError(f"момент {t} вне расчета")
        return self.norm_u[position], self.norm_v[position]


def prepare(cloud: PointCloud, sim_config: SimulationConfig) -> Discretization:
    """Звезды, коэффициенты и система для облака"""
    stencils = compute_all_stencils(build_all_stars(cloud, sim_config.s), sim_config.weights)
    boundary_stencils = None
    if sim_config.neumann == config.NEUMANN_STENCIL:
        boundary_stencils = compute_all_stencils(build_all_boundary_stars(cloud, sim_config.s), sim_config.weights)
    system = assemble_elliptic(cloud, stencils, sim_config.neumann, boundary_stencils)
    return Discretization(cloud=cloud, stencils=stencils, system=system, boundary_stencils=boundary_stencils)


def rhs_terms(u0, v0, du: np.ndarray, dv: np.ndarray, gamma: MotilityFunction, mu: float):
    """Правая часть параболического уравнения по оценкам производных (..., 5)"""
    g0, g1, g2, _ = gamma.derivatives(v0)
    laplacian_u = du[..., DXX] + du[..., DYY]
    return (
        g0 * laplacian_u
        + 2.0 * g1 * (du[..., DX] * dv[..., DX] + du[..., DY] * dv[..., DY])
        + u0 * g2 * (dv[..., DX] ** 2 + dv[..., DY] ** 2)
        + u0 * g1 * (v0 - u0)
        + mu * u0 * (1.0 - u0)
    )


def parabolic_rhs(state: FieldState, stencils: StencilSet, gamma: MotilityFunction,
                  mu: float, node: int) -> float:
    """Правая часть для одного внутреннего узла (индекс узла облака)"""
    positions = np.flatnonzero(stencils.centers == node)
    if positions.size == 0:
        raise StencilMismatchError(f"узел {node} не является центром звезды")
    row = stencils.row(int(positions[0]))
    du = apply_stencil(row, row.sample(state.u))
    dv = apply_stencil(row, row.sample(state.v))
    return float(rhs_terms(state.u[node], state.v[node], du, dv, gamma, mu))


def parabolic_rhs_all(state: FieldState, stencils: StencilSet, gamma: MotilityFunction, mu: float) -> np.ndarray:
    """Правая часть во всех внутренних узлах (порядок stencils.centers)"""
    du = derivatives(stencils, state.u)
    dv = derivatives(stencils, state.v)
    centers = stencils.centers
    return rhs_terms(state.u[centers], state.v[centers], du, dv, gamma, mu)


def initialize(cloud: PointCloud, sim_config: SimulationConfig, u0: InitialCondition,
               system: EllipticSystem) -> FieldState:
    """U^0 в узлах и V^0 из эллиптического уравнения"""
    coords = cloud.coordinates
    u = np.asarray(u0(coords[:, 0], coords[:, 1]), dtype=float) * np.ones(cloud.size)

    for report in (
        validate_initial_condition(u),
        validate_hypotheses(sim_config.gamma, sim_config.params),
    ):
        if report.passed:
            continue
        if sim_config.strict_hypotheses:
            raise HypothesisError(report)
        logger.warning(f"Продолжаем расчет без выполнения гипотез: {'; '.join(report.failures)}")

    v = solve_elliptic(system, u)
    return FieldState(u=u, v=v, time=0.0, step=0)


def step(state: FieldState, system: EllipticSystem, stencils: StencilSet,
         sim_config: SimulationConfig) -> FieldState:
    """Один шаг: явное обновление U, условие Неймана, неявное V"""
    next_step = state.step + 1
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        try:
            rhs = parabolic_rhs_all(state, stencils, sim_config.gamma, sim_config.params.mu)
        except MotilityDomainError as e:
            # V вышла из области определения γ
            raise DivergenceError(step=next_step, node=int(np.argmin(state.v))) from e
        u = state.u.copy()
        u[stencils.centers] = state.u[stencils.centers] + sim_config.dt * rhs
    _check_finite(u, next_step)

    u = apply_neumann(system, u)
    _check_finite(u, next_step)

    v = solve_elliptic(system, u)
    _check_finite(v, next_step)
    return FieldState(u=u, v=v, time=next_step * sim_config.dt, step=next_step)


def norms(state: FieldState) -> Tuple[float, float]:
    """(max |U - 1|, max |V - 1|) по всем узлам"""
    return float(np.max(np.abs(state.u - 1.0))), float(np.max(np.abs(state.v - 1.0)))


def run(cloud: PointCloud, sim_config: SimulationConfig, u0: InitialCondition,
        discretization: Optional[Discretization] = None) -> SimulationResult:
    """Расчет до t_final с записью норм на каждом шаге"""
    if discretization is None:
        discretization = prepare(cloud, sim_config)
    stencils, system = discretization.stencils, discretization.system

    state = initialize(cloud, sim_config, u0, system)
    result = SimulationResult(dt=sim_config.dt)
    result.record(state)

    snapshot_steps: Dict[int, List[float]] = {}
    for t in sim_config.snapshot_times:
        snapshot_steps.setdefault(int(round(t / sim_config.dt)), []).append(t)

    logger.info(
        f"Старт расчета: {cloud.size} узлов, dt = {sim_config.dt:g}, t_final = {sim_config.t_final:g}, "
        f"шагов {sim_config.n_steps}"
    )
    _check_stability(state, discretization, sim_config, result)
    _take_snapshots(state, snapshot_steps, result)

    every = sim_config.stability_every
    for _ in range(sim_config.n_steps):
        state = step(state, system, stencils, sim_config)
        result.record(state)
        logger.debug(f"t = {state.time:g}: |U-1| = {result.norm_u[-1]:.6e}, |V-1| = {result.norm_v[-1]:.6e}")
        if every and state.step % every == 0:
            _check_stability(state, discretization, sim_config, result)
        _take_snapshots(state, snapshot_steps, result)

    result.final_state = state
    logger.info(
        f"Расчет завершен: t = {state.time:g}, |U-1| = {result.norm_u[-1]:.6e}, |V-1| = {result.norm_v[-1]:.6e}"
    )
    return result


def write_norms(result: SimulationResult, path: Union[str, Path]) -> None:
    """norms.csv: t,norm_u,norm_v"""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(config.NORMS_HEADER)
        for t, norm_u, norm_v in zip(result.times, result.norm_u, result.norm_v):
            writer.writerow([format_value(t), format_value(norm_u), format_value(norm_v)])
    logger.info(f"Ряд норм записан в {path}")


def write_snapshot(cloud: PointCloud, state: FieldState, path: Union[str, Path]) -> None:
    """Снимок x,y,u,v"""
    path = Path(path)
    coords = cloud.coordinates
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(config.SNAPSHOT_HEADER)
        for (x, y), u, v in zip(coords, state.u, state.v):
            writer.writerow([format_value(x), format_value(y), format_value(u), format_value(v)])
    logger.info(f"Снимок t = {state.time:g} записан в {path}")


def _check_finite(values: np.ndarray, step_number: int) -> None:
    bad = ~np.isfinite(values) | (np.abs(values) > config.DIVERGENCE_THRESHOLD)
    if np.any(bad):
        raise DivergenceError(step=step_number, node=int(np.flatnonzero(bad)[0]))


def _take_snapshots(state: FieldState, snapshot_steps: Dict[int, List[float]], result: SimulationResult) -> None:
    for t in snapshot_steps.get(state.step, []):
        result.snapshots[t] = state


def _check_stability(state: FieldState, discretization: Discretization, sim_config: SimulationConfig,
                     result: SimulationResult) -> None:
    try:
        report = max_stable_dt(
            state, discretization.stencils, sim_config.gamma, sim_config.params.mu,
            laplacian_factor=sim_config.laplacian_factor,
        )
    except StabilityBreakdownError as e:
        if sim_config.enforce_stability_bound:
            raise
        logger.warning(f"Оценка шага не вычислена: {e}")
        return

    result.stability_reports.append(report)
    if report.satisfies(sim_config.dt):
        logger.info(f"t = {state.time:g}: оценка шага {report.global_bound:.6g}, dt = {sim_config.dt:g} допустим")
        return
    if sim_config.enforce_stability_bound:
        raise StabilityViolationError(sim_config.dt, report.global_bound, report.worst_node)
    logger.warning(
        f"t = {state.time:g}: dt = {sim_config.dt:g} превышает оценку шага {report.global_bound:.6g} "
        f"(узел {report.worst_node})"
    )
