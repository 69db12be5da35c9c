"""
Zero crossings of heat currents along a sweep
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from scipy import optimize

from src.refrigerator.model import Bath, ModelParams
from src.refrigerator.thermo import analyze
from src.shared.exceptions import RefrigeratorError
from src.shared.logging import get_logger
from src.sweeps.spec import SweepSpec

logger = get_logger(__name__)

CROSSING_XTOL = 1e-4
OBSERVABLES = {"Qdot_H": Bath.H, "Qdot_R": Bath.R, "Qdot_C": Bath.C}


@dataclass(frozen=True)
class Crossing:
    """Refined root of one observable on one g line"""

    g: float
    observable: str
    variable: str
    value: float
    bracket: Tuple[float, float]
    residual: float


def _observable(params: ModelParams, variable: str, observable: str):
    bath = OBSERVABLES[observable]

    def evaluate(x: float) -> float:
        return analyze(params.with_updates(**{variable: float(x)})).q_dot[bath]

    return evaluate


def _sampled(evaluate, grid: Sequence[float]) -> List[Optional[float]]:
    values: List[Optional[float]] = []
    for x in grid:
        try:
            values.append(evaluate(x))
        except RefrigeratorError as e:
            logger.debug(f"Crossing scan skipped x={x:.6g}: {e}")
            values.append(None)
    return values


def find_zero_crossing(
    spec: SweepSpec,
    observable: str = "Qdot_C",
    xtol: float = CROSSING_XTOL,
) -> List[Crossing]:
    """
    Locate every sign change of an observable on the sweep grid and refine it

    Adjacent grid points with opposite signs bracket a root, which is then
    bisected to xtol. Points that fail to evaluate break the bracket chain.

    Args:
        spec: Sweep whose grid is scanned (one scan per g line)
        observable: Qdot_H, Qdot_R or Qdot_C
        xtol: Absolute tolerance on the swept variable

    Returns:
        Crossings ordered by line then by position
    """
    if observable not in OBSERVABLES:
        raise ValueError(f"Unknown observable '{observable}', choose from {sorted(OBSERVABLES)}")

    grid = spec.grid
    crossings: List[Crossing] = []
    for params in spec.lines:
        evaluate = _observable(params, spec.variable, observable)
        values = _sampled(evaluate, grid)
        for k in range(len(grid) - 1):
            left, right = values[k], values[k + 1]
            if left is None or right is None:
                continue
            if left != 0.0 and left * right >= 0:
                continue
            bracket = (float(grid[k]), float(grid[k + 1]))
            try:
                if left == 0.0:
                    root = bracket[0]
                else:
                    root = float(optimize.bisect(evaluate, *bracket, xtol=xtol))
                residual = float(evaluate(root))
            except RefrigeratorError as e:
                logger.warning(
                    f"Skipping {observable} bracket {bracket} at g={params.g:.6g}: {e}"
                )
                continue
            crossing = Crossing(
                g=params.g,
                observable=observable,
                variable=spec.variable,
                value=root,
                bracket=bracket,
                residual=residual,
            )
            logger.info(
                f"{observable} changes sign at {spec.variable}={root:.6f} (g={params.g:.6g})"
            )
            crossings.append(crossing)
    return crossings
