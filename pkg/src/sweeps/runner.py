"""
Parameter sweeps over the steady-state pipeline
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import pandas as pd

from src.refrigerator.model import Bath, ModelParams
from src.refrigerator.thermo import SteadyReport, analyze
from src.shared.exceptions import RefrigeratorError
from src.shared.logging import get_logger
from src.shared.settings import get_settings
from src.sweeps.spec import COLUMN_LABELS, RESULT_COLUMNS, SweepSpec

logger = get_logger(__name__)


@dataclass(frozen=True)
class SkippedPoint:
    """A grid point whose parameters were rejected or whose solve failed"""

    line: int
    g: float
    value: float
    error: str
    reason: str


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Ordered table of evaluated points plus the points that were skipped"""

    spec: SweepSpec
    table: pd.DataFrame
    skipped: List[SkippedPoint] = field(default_factory=list)

    @property
    def key_columns(self) -> List[str]:
        return key_columns(self.spec)

    def output_frame(self) -> pd.DataFrame:
        """Requested columns, relabeled with their header names"""
        columns = list(self.spec.output_columns)
        return self.table[columns].rename(columns=COLUMN_LABELS)


def key_columns(spec: SweepSpec) -> List[str]:
    columns = ["line", "g"]
    if spec.variable != "g":
        columns.append(spec.variable)
    return columns


def report_row(report: SteadyReport) -> Dict[str, Any]:
    """Observables of one steady report as a flat table row"""
    eta = report.efficiency
    return {
        "Qdot_H": report.q_dot[Bath.H],
        "Qdot_R": report.q_dot[Bath.R],
        "Qdot_C": report.q_dot[Bath.C],
        "eta": math.nan if eta is None else eta,
        "sigma": report.entropy_production,
        "T_v": report.t_virtual,
        "refrigerator": report.is_refrigerator,
        "first_law_residual": report.first_law_residual,
        "stationarity_residual": report.diagnostics["stationarity_residual"],
    }


def _evaluate(
    point: Tuple[int, ModelParams, float], variable: str
) -> Union[Dict[str, Any], SkippedPoint]:
    line, params, value = point
    try:
        report = analyze(params)
    except RefrigeratorError as e:
        logger.warning(f"Skipping {variable}={value:.6g} at g={params.g:.6g}: {e}")
        return SkippedPoint(
            line=line, g=params.g, value=value, error=type(e).__name__, reason=str(e)
        )

    row: Dict[str, Any] = {"line": line, "g": params.g}
    if variable != "g":
        row[variable] = value
    row.update(report_row(report))
    return row


def grid_points(spec: SweepSpec) -> List[Tuple[int, ModelParams, float]]:
    """(line index, parameters, swept value) in table order"""
    points = []
    for line, base in enumerate(spec.lines):
        for value in spec.grid:
            value = float(value)
            points.append((line, base.with_updates(**{spec.variable: value}), value))
    return points


def run_sweep(spec: SweepSpec, max_workers: Optional[int] = None) -> SweepResult:
    """
    Evaluate every grid point of a sweep

    Points are independent; they are solved on a thread pool and collected
    back in grid order, so the table is identical for any worker count.

    Args:
        spec: Sweep description
        max_workers: Pool size (defaults to settings.max_workers)

    Returns:
        SweepResult; points failing validation or a numerical check are
        listed in .skipped and omitted from the table
    """
    workers = max_workers or get_settings().max_workers
    points = grid_points(spec)
    logger.info(
        f"Sweeping {spec.variable} over [{spec.start}, {spec.stop}] "
        f"({spec.steps} points x {len(spec.lines)} lines) on {workers} workers"
    )

    with ThreadPoolExecutor(max_workers=workers) as executor:
        outcomes = list(executor.map(lambda point: _evaluate(point, spec.variable), points))

    rows = [outcome for outcome in outcomes if isinstance(outcome, dict)]
    skipped = [outcome for outcome in outcomes if isinstance(outcome, SkippedPoint)]

    columns = key_columns(spec) + list(RESULT_COLUMNS)
    table = pd.DataFrame(rows, columns=columns)
    table = table.astype({"line": "int64", "refrigerator": "bool"})
    for column in columns:
        if column not in ("line", "refrigerator"):
            table[column] = table[column].astype("float64")

    if skipped:
        logger.warning(f"{len(skipped)} of {len(points)} sweep points skipped")
    logger.info(f"Sweep complete: {len(table)} rows")
    return SweepResult(spec=spec, table=table, skipped=skipped)
