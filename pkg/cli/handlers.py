"""Обработчики подкоманд"""
import argparse
from dataclasses import dataclass, field, fields
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from dotenv import dotenv_values

import config
from cli.messages import (
    get_compare_message,
    get_convergence_table,
    get_report_table,
    get_stability_message,
    get_validation_message,
)
from cli.presets import ExperimentPreset, equilibrium_initial, get_preset
from cloud.generators import generate_irregular_cloud, generate_regular_cloud
from cloud.models import PointCloud
from cloud.storage import load_cloud, save_cloud
from errors import (
    CloudFormatError,
    ConfigError,
    DivergenceError,
    GfdError,
    StabilityViolationError,
)
from gfd.stencil import WeightScheme
from model.motility import ModelParameters, get_motility
from model.validators import check_derivatives, validate_grid_string, validate_hypotheses, validate_initial_condition
from solver.convergence import manufactured_elliptic_error, observed_order
from solver.stability import equilibrium_bound, max_stable_dt, write_stability_csv
from solver.time_stepper import SimulationConfig, initialize, prepare, run, write_norms, write_snapshot
from utils.helpers import ensure_directory, parse_times, snapshot_filename

logger = logging.getLogger(__name__)

CLOUD_REGULAR = "regular"
CLOUD_IRREGULAR = "irregular"
CLOUD_FILE = "file"

TRUE_VALUES = ["да", "yes", "true", "1", "on"]
FALSE_VALUES = ["нет", "no", "false", "0", "off"]


@dataclass
class RunSettings:
    """Параметры запуска после слияния файла конфигурации и флагов"""
    preset: str = config.PRESET_EXAMPLE1
    grid: Tuple[int, int] = config.DEFAULT_GRID
    cloud: str = CLOUD_REGULAR
    cloud_file: Optional[str] = None
    perturbation: float = config.DEFAULT_PERTURBATION
    seed: int = 0
    dt: Optional[float] = None  # None = из пресета
    t_final: float = config.DEFAULT_T_FINAL
    s: int = config.DEFAULT_STAR_SIZE
    alpha: float = config.DEFAULT_WEIGHT_EXPONENT
    mu: Optional[float] = None
    gamma: Optional[str] = None
    out: str = "results"
    enforce_stability: bool = False
    neumann: str = config.DEFAULT_NEUMANN
    laplacian_factor: Optional[str] = None  # None = из пресета
    stability_every: int = config.DEFAULT_STABILITY_EVERY
    snapshot_times: Optional[List[float]] = field(default=None)


def _parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in TRUE_VALUES:
        return True
    if value in FALSE_VALUES:
        return False
    raise ValueError(f"ожидалось логическое значение, получено '{text}'")


def _parse_grid(text: str) -> Tuple[int, int]:
    grid = validate_grid_string(text)
    if grid is None:
        raise ValueError(f"некорректный размер сетки '{text}'")
    return grid


_CONVERTERS = {
    "preset": str,
    "grid": _parse_grid,
    "cloud": str,
    "cloud_file": str,
    "perturbation": float,
    "seed": int,
    "dt": float,
    "t_final": float,
    "s": int,
    "alpha": float,
    "mu": float,
    "gamma": str,
    "out": str,
    "enforce_stability": _parse_bool,
    "neumann": str,
    "laplacian_factor": str,
    "stability_every": int,
    "snapshot_times": parse_times,
}


def load_config_file(path: str) -> Dict[str, object]:
    """Чтение файла key = value с комментариями #"""
    if not Path(path).is_file():
        raise FileNotFoundError(f"файл конфигурации {path} не найден")
    values = {}
    for key, raw in dotenv_values(path).items():
        name = key.strip().lower().replace("-", "_")
        if name not in _CONVERTERS:
            raise ConfigError(f"неизвестный ключ '{key}' в {path}")
        if raw is None or not raw.strip():
            raise ConfigError(f"пустое значение ключа '{key}' в {path}")
        try:
            values[name] = _CONVERTERS[name](raw.strip())
        except ValueError as e:
            raise ConfigError(f"ключ '{key}': {e}") from e
    logger.info(f"Прочитан файл конфигурации {path}: {len(values)} ключей")
    return values


def resolve_settings(args: argparse.Namespace) -> RunSettings:
    """Значения по умолчанию, затем файл конфигурации, затем флаги"""
    values: Dict[str, object] = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for item in fields(RunSettings):
        flag = getattr(args, item.name, None)
        if flag is not None:
            values[item.name] = flag
    settings = RunSettings(**values)

    if settings.cloud not in (CLOUD_REGULAR, CLOUD_IRREGULAR, CLOUD_FILE):
        raise ConfigError(f"неизвестный тип облака '{settings.cloud}'")
    if settings.cloud == CLOUD_FILE and not settings.cloud_file:
        raise ConfigError("для --cloud file нужен --cloud-file")
    if settings.neumann not in config.NEUMANN_MODES:
        raise ConfigError(f"неизвестный режим условия Неймана '{settings.neumann}'")
    if settings.laplacian_factor is not None and settings.laplacian_factor not in config.LAPLACIAN_FACTORS:
        raise ConfigError(f"неизвестный множитель лапласиана '{settings.laplacian_factor}'")
    return settings


def build_cloud(settings: RunSettings) -> PointCloud:
    """Облако по настройкам"""
    nx, ny = settings.grid
    if settings.cloud == CLOUD_FILE:
        return load_cloud(settings.cloud_file)
    if settings.cloud == CLOUD_IRREGULAR:
        return generate_irregular_cloud(nx, ny, settings.perturbation, settings.seed)
    return generate_regular_cloud(nx, ny)


def build_simulation_config(settings: RunSettings, preset: ExperimentPreset,
                            t_final: Optional[float] = None) -> SimulationConfig:
    """Конфигурация расчета: пресет с переопределениями"""
    t_final = settings.t_final if t_final is None else t_final
    snapshot_times = settings.snapshot_times
    if snapshot_times is None:
        snapshot_times = [t for t in preset.snapshot_times if t <= t_final]
    return SimulationConfig(
        gamma=get_motility(settings.gamma or preset.gamma),
        params=ModelParameters(mu=settings.mu if settings.mu is not None else preset.mu),
        dt=settings.dt if settings.dt is not None else preset.dt,
        t_final=t_final,
        s=settings.s,
        weights=WeightScheme(settings.alpha),
        snapshot_times=snapshot_times,
        enforce_stability_bound=settings.enforce_stability,
        neumann=settings.neumann,
        laplacian_factor=settings.laplacian_factor or preset.laplacian_factor,
        stability_every=settings.stability_every,
        strict_hypotheses=preset.strict_hypotheses,
    )


def cmd_run(args: argparse.Namespace) -> int:
    """Расчет с записью norms.csv, снимков, report.txt и stability.txt"""
    settings = resolve_settings(args)
    preset = get_preset(settings.preset)
    sim_config = build_simulation_config(settings, preset)
    cloud = build_cloud(settings)

    result = run(cloud, sim_config, preset.u0)

    out = ensure_directory(settings.out)
    write_norms(result, out / config.NORMS_FILE)
    for t, state in result.snapshots.items():
        write_snapshot(cloud, state, out / snapshot_filename(t))

    title = f"{preset.name}: {cloud.size} узлов, dt = {sim_config.dt:g}, s = {sim_config.s}, Нейман: {sim_config.neumann}"
    report_text = get_report_table(result, preset.report_times, title)
    (out / config.REPORT_FILE).write_text(report_text, encoding="utf-8")

    initial_report = result.stability_reports[0] if result.stability_reports else None
    (out / config.STABILITY_FILE).write_text(get_stability_message(initial_report, sim_config.dt), encoding="utf-8")
    if initial_report is not None:
        write_stability_csv(initial_report, out / config.STABILITY_CSV_FILE)

    print(report_text, end="")
    logger.info(f"Результаты записаны в {out}")
    return config.EXIT_OK


def cmd_generate_cloud(args: argparse.Namespace) -> int:
    """Генерация облака и запись в CSV"""
    if args.kind == CLOUD_IRREGULAR:
        cloud = generate_irregular_cloud(args.nx, args.ny, args.perturbation, args.seed)
    else:
        cloud = generate_regular_cloud(args.nx, args.ny)
    save_cloud(cloud, args.path)
    print(f"{cloud.size} узлов записано в {args.path}")
    return config.EXIT_OK


def cmd_stability_check(args: argparse.Namespace) -> int:
    """Оценка шага при t = 0; код 0, если dt строго меньше нее"""
    settings = resolve_settings(args)
    preset = get_preset(settings.preset)
    sim_config = build_simulation_config(settings, preset)
    cloud = build_cloud(settings)

    discretization = prepare(cloud, sim_config)
    u0 = equilibrium_initial if args.equilibrium else preset.u0
    state = initialize(cloud, sim_config, u0, discretization.system)
    report = max_stable_dt(
        state, discretization.stencils, sim_config.gamma, sim_config.params.mu,
        laplacian_factor=sim_config.laplacian_factor,
    )

    closed_form = None
    if args.equilibrium:
        closed_form = equilibrium_bound(
            discretization.stencils, sim_config.gamma, sim_config.params.mu, sim_config.laplacian_factor
        )
    print(get_stability_message(report, sim_config.dt, closed_form), end="")

    if args.per_node:
        write_stability_csv(report, args.per_node)

    if report.satisfies(sim_config.dt):
        return config.EXIT_OK
    logger.warning(f"dt = {sim_config.dt:g} превышает оценку {report.global_bound:.6g}")
    return config.EXIT_FAILURE


def cmd_validate(args: argparse.Namespace) -> int:
    """Проверка гипотез о γ и начальном условии"""
    settings = resolve_settings(args)
    preset = get_preset(settings.preset)
    gamma = get_motility(settings.gamma or preset.gamma)
    params = ModelParameters(mu=settings.mu if settings.mu is not None else preset.mu)
    cloud = build_cloud(settings)

    coords = cloud.coordinates
    reports = [
        validate_hypotheses(gamma, params),
        check_derivatives(gamma),
        validate_initial_condition(preset.u0(coords[:, 0], coords[:, 1])),
    ]
    print(get_validation_message(reports), end="")
    return config.EXIT_OK if all(report.passed for report in reports) else config.EXIT_FAILURE


def cmd_convergence(args: argparse.Namespace) -> int:
    """Таблица ошибок на точном решении эллиптической задачи"""
    grids = [int(part) for part in args.grids.split(",") if part.strip()]
    if len(grids) < 2 or any(n < config.MIN_GRID_SIZE for n in grids):
        raise ConfigError(f"нужно не меньше двух сеток размера >= {config.MIN_GRID_SIZE}")

    errors = [manufactured_elliptic_error(n, args.neumann, args.s, args.alpha) for n in grids]
    orders = observed_order(errors, [1.0 / (n - 1) for n in grids])
    print(get_convergence_table(grids, errors, orders, args.neumann), end="")
    return config.EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    """Сравнение регулярного и нерегулярного облаков в момент t"""
    settings = resolve_settings(args)
    preset = get_preset(settings.preset)
    sim_config = build_simulation_config(settings, preset, t_final=args.time)
    sim_config.snapshot_times = []
    nx, ny = settings.grid

    regular = run(generate_regular_cloud(nx, ny), sim_config, preset.u0)
    irregular = run(generate_irregular_cloud(nx, ny, settings.perturbation, settings.seed), sim_config, preset.u0)

    regular_norm = regular.norm_u[-1]
    irregular_norm = irregular.norm_u[-1]
    if not regular_norm > config.COMPARE_NORM_FLOOR:
        raise ConfigError(
            f"||U-1||_inf на регулярном облаке при t = {args.time:g} равна {regular_norm:.3e}, расхождение не определено"
        )
    gap = abs(regular_norm - irregular_norm) / abs(regular_norm)
    print(get_compare_message(args.time, regular_norm, irregular_norm, gap, config.COMPARE_TOLERANCE), end="")
    return config.EXIT_OK if gap <= config.COMPARE_TOLERANCE else config.EXIT_FAILURE


def _add_settings_arguments(parser: argparse.ArgumentParser) -> None:
    # None = значение не задано флагом
    parser.add_argument("--config", help="файл key = value")
    parser.add_argument("--preset", choices=config.PRESETS)
    parser.add_argument("--grid", type=_parse_grid, help="размер сетки NXxNY")
    parser.add_argument("--cloud", choices=[CLOUD_REGULAR, CLOUD_IRREGULAR, CLOUD_FILE])
    parser.add_argument("--cloud-file", dest="cloud_file")
    parser.add_argument("--perturbation", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--dt", type=float)
    parser.add_argument("--t-final", dest="t_final", type=float)
    parser.add_argument("--s", type=int, help="размер звезды")
    parser.add_argument("--alpha", type=float, help="показатель весов")
    parser.add_argument("--mu", type=float)
    parser.add_argument("--gamma", choices=config.GAMMA_NAMES)
    parser.add_argument("--out")
    parser.add_argument("--enforce-stability", dest="enforce_stability", action="store_true", default=None)
    parser.add_argument("--neumann", choices=config.NEUMANN_MODES)
    parser.add_argument("--laplacian-factor", dest="laplacian_factor", choices=config.LAPLACIAN_FACTORS)
    parser.add_argument("--stability-every", dest="stability_every", type=int)
    parser.add_argument("--snapshot-times", dest="snapshot_times", type=parse_times)


def setup_parser() -> argparse.ArgumentParser:
    """Парсер аргументов со всеми подкомандами"""
    parser = argparse.ArgumentParser(prog="gfd-motility", description="GFD-решатель системы с подавлением подвижности")
    parser.add_argument("--verbose", action="store_true", help="подробный журнал (DEBUG)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run_parser = subparsers.add_parser("run", help="расчет")
    _add_settings_arguments(run_parser)
    run_parser.set_defaults(handler=cmd_run)

    cloud_parser = subparsers.add_parser("generate-cloud", help="генерация облака")
    cloud_parser.add_argument("kind", choices=[CLOUD_REGULAR, CLOUD_IRREGULAR])
    cloud_parser.add_argument("nx", type=int)
    cloud_parser.add_argument("ny", type=int)
    cloud_parser.add_argument("path", nargs="?", default="cloud.csv")
    cloud_parser.add_argument("--perturbation", type=float, default=config.DEFAULT_PERTURBATION)
    cloud_parser.add_argument("--seed", type=int, default=0)
    cloud_parser.set_defaults(handler=cmd_generate_cloud)

    stability_parser = subparsers.add_parser("stability-check", help="оценка шага при t = 0")
    _add_settings_arguments(stability_parser)
    stability_parser.add_argument("--equilibrium", action="store_true", help="начальные данные (1, 1)")
    stability_parser.add_argument("--per-node", dest="per_node", help="CSV с оценками по узлам")
    stability_parser.set_defaults(handler=cmd_stability_check)

    validate_parser = subparsers.add_parser("validate", help="проверка гипотез")
    _add_settings_arguments(validate_parser)
    validate_parser.set_defaults(handler=cmd_validate)

    convergence_parser = subparsers.add_parser("convergence", help="порядок сходимости на точном решении")
    convergence_parser.add_argument("--grids", default="11,21,41")
    convergence_parser.add_argument("--neumann", choices=config.NEUMANN_MODES, default=config.NEUMANN_STENCIL)
    convergence_parser.add_argument("--s", type=int, default=config.DEFAULT_STAR_SIZE)
    convergence_parser.add_argument("--alpha", type=float, default=config.DEFAULT_WEIGHT_EXPONENT)
    convergence_parser.set_defaults(handler=cmd_convergence)

    compare_parser = subparsers.add_parser("compare", help="регулярное и нерегулярное облака")
    _add_settings_arguments(compare_parser)
    compare_parser.add_argument("--time", type=float, default=0.05)
    compare_parser.set_defaults(handler=cmd_compare)

    return parser


def exit_code(error: BaseException) -> int:
    """Код выхода для исключения"""
    if isinstance(error, (StabilityViolationError, DivergenceError)):
        return config.EXIT_FAILURE
    if isinstance(error, (CloudFormatError, OSError)):
        return config.EXIT_IO_ERROR
    if isinstance(error, GfdError):
        return config.EXIT_CONFIG_ERROR
    raise error


def dispatch(argv: Optional[List[str]] = None) -> int:
    """Разбор аргументов и запуск подкоманды"""
    args = setup_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        return args.handler(args)
    except (GfdError, OSError) as e:
        code = exit_code(e)
        logger.error(f"Команда {args.command} завершилась с ошибкой: {e}")
        return code
