"""Шаблоны текстовых отчетов"""
from typing import List, Optional, Sequence

from model.validators import ValidationReport
from solver.stability import StabilityReport
from solver.time_stepper import SimulationResult
from utils.helpers import format_norm


def get_report_table(result: SimulationResult, report_times: Sequence[float], title: str) -> str:
    """Таблица норм: строка на норму, столбец на момент времени"""
    times = [t for t in report_times if t <= result.times[-1] + 0.5 * result.dt]
    values = [result.norms_at(t) for t in times]

    label_width = 18
    column_width = 12
    lines = [title]
    lines.append("T(t)".ljust(label_width) + "".join(f"{t:g}".rjust(column_width) for t in times))
    lines.append("||U-1||_inf".ljust(label_width) + "".join(format_norm(u).rjust(column_width) for u, _ in values))
    lines.append("||V-1||_inf".ljust(label_width) + "".join(format_norm(v).rjust(column_width) for _, v in values))
    lines.append(
        "||U-1||+||V-1||".ljust(label_width) + "".join(format_norm(u + v).rjust(column_width) for u, v in values)
    )
    return "\n".join(lines) + "\n"


def get_stability_message(report: Optional[StabilityReport], dt: float,
                          closed_form: Optional[float] = None) -> str:
    """Сообщение об оценке шага"""
    if report is None:
        return "Оценка шага не вычислена: знаменатель неположителен\n"

    verdict = "выполнено" if report.satisfies(dt) else "НЕ выполнено"
    lines = [
        f"global_bound = {report.global_bound:.6e}",
        f"worst_node = {report.worst_node}",
        f"laplacian_factor = {report.laplacian_factor}",
        f"dt = {dt:g}: условие dt < global_bound {verdict}",
    ]
    if closed_form is not None:
        lines.append(f"closed_form_equilibrium_bound = {closed_form:.6e}")
    return "\n".join(lines) + "\n"


def get_convergence_table(grids: Sequence[int], errors: Sequence[float], orders: Sequence[float],
                          neumann: str) -> str:
    """Таблица ошибок на точном решении"""
    lines = [f"Точное решение v = cos(πx)cos(πy), условие Неймана: {neumann}", "grid        h          error       order"]
    for position, (n, error) in enumerate(zip(grids, errors)):
        order = f"{orders[position - 1]:.3f}" if position > 0 else "-"
        lines.append(f"{n}x{n}".ljust(12) + f"{1.0 / (n - 1):.5f}".ljust(11) + format_norm(error).ljust(12) + order)
    return "\n".join(lines) + "\n"


def get_compare_message(t: float, regular: float, irregular: float, gap: float, tolerance: float) -> str:
    """Сравнение регулярного и нерегулярного облаков"""
    verdict = "в пределах допуска" if gap <= tolerance else "ПРЕВЫШАЕТ допуск"
    return (
        f"t = {t:g}\n"
        f"регулярное облако:   ||U-1||_inf = {format_norm(regular)}\n"
        f"нерегулярное облако: ||U-1||_inf = {format_norm(irregular)}\n"
        f"относительное расхождение {gap:.2%} {verdict} ({tolerance:.0%})\n"
    )


def get_validation_message(reports: List[ValidationReport]) -> str:
    """Сводка проверок гипотез"""
    return "\n".join(report.summary() for report in reports) + "\n"
