"""
Sweep specifications and figure presets
"""
import math
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.refrigerator.model import ModelParams
from src.refrigerator.thermo import virtual_temperature

SweepVariable = Literal["T_H", "g", "T_C", "T_R"]

# Output column -> header label; temperatures and currents carry nominal unit strings
COLUMN_LABELS: Dict[str, str] = {
    "T_H": "T_H[K]",
    "T_R": "T_R[K]",
    "T_C": "T_C[K]",
    "g": "g",
    "Qdot_H": "Qdot_H[J/s]",
    "Qdot_R": "Qdot_R[J/s]",
    "Qdot_C": "Qdot_C[J/s]",
    "eta": "eta",
    "sigma": "sigma",
    "T_v": "T_v[K]",
    "refrigerator": "refrigerator",
    "first_law_residual": "first_law_residual",
    "stationarity_residual": "stationarity_residual",
}

CURRENT_COLUMNS = ("Qdot_H", "Qdot_R", "Qdot_C")
RESULT_COLUMNS = CURRENT_COLUMNS + (
    "eta",
    "sigma",
    "T_v",
    "refrigerator",
    "first_law_residual",
    "stationarity_residual",
)
DEFAULT_OUTPUTS = CURRENT_COLUMNS + ("eta", "sigma")


class SweepSpec(BaseModel):
    """One swept variable over a linear grid, optionally repeated for several g values"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    base: ModelParams
    variable: SweepVariable = "T_H"
    start: float
    stop: float
    steps: int = Field(ge=2)
    g_values: Tuple[float, ...] = ()
    outputs: Optional[Tuple[str, ...]] = None

    @model_validator(mode="after")
    def _check_consistency(self) -> "SweepSpec":
        if not self.start < self.stop:
            raise ValueError(f"Sweep range must satisfy from < to, got [{self.start}, {self.stop}]")
        if self.variable == "g" and self.g_values:
            raise ValueError("g cannot be both the swept variable and the line parameter")
        if self.outputs is not None:
            unknown = set(self.outputs) - set(COLUMN_LABELS)
            if unknown:
                raise ValueError(f"Unknown output columns: {sorted(unknown)}")
        return self

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    @property
    def lines(self) -> List[ModelParams]:
        """Base parameters for each g line (a single line when no g list is given)"""
        if not self.g_values:
            return [self.base]
        return [self.base.with_updates(g=g) for g in self.g_values]

    @property
    def output_columns(self) -> Tuple[str, ...]:
        if self.outputs is not None:
            return self.outputs
        leading: Tuple[str, ...] = (self.variable,)
        if len(self.g_values) > 1:
            leading = ("g",) + leading
        return leading + DEFAULT_OUTPUTS


def default_range(base: ModelParams, variable: SweepVariable) -> Tuple[float, float]:
    """Axis range used when the caller gives none"""
    if variable == "T_H":
        t_v = virtual_temperature(base)
        upper = 3.0 * t_v if math.isfinite(t_v) and t_v > base.T_C else 100.0
        return base.T_C, upper
    if variable == "g":
        return 0.001 * base.omega_H, 0.5 * base.omega_H
    if variable == "T_C":
        return 0.5 * base.T_C, base.T_R
    return base.T_C, base.T_H


class FigurePreset(BaseModel):
    """Fixed parameters and sweep behind one published figure"""

    model_config = ConfigDict(frozen=True)

    id: str
    description: str
    base: ModelParams
    start: float
    stop: float
    g_fractions: Tuple[float, ...]
    outputs: Tuple[str, ...]
    steps: int = 200

    def to_spec(
        self,
        steps: Optional[int] = None,
        start: Optional[float] = None,
        stop: Optional[float] = None,
    ) -> SweepSpec:
        g_values = tuple(fraction * self.base.omega_H for fraction in self.g_fractions)
        if not g_values:
            raise ValueError(f"Preset {self.id} has no g lines")
        return SweepSpec(
            base=self.base.with_updates(g=g_values[0]),
            variable="T_H",
            start=self.start if start is None else start,
            stop=self.stop if stop is None else stop,
            steps=self.steps if steps is None else steps,
            g_values=g_values if len(g_values) > 1 else (),
            outputs=self.outputs,
        )


def _paper_base(**changes: float) -> ModelParams:
    omega_h = 3.0
    gamma = 0.001 * omega_h
    values = dict(
        omega_H=omega_h,
        omega_C=1.0,
        g=0.001 * omega_h,
        T_H=30.0,
        T_R=21.0,
        T_C=18.0,
        gamma_H=gamma,
        gamma_R=gamma,
        gamma_C=gamma,
    )
    values.update(changes)
    return ModelParams(**values)


FIGURE_PRESETS: Dict[str, FigurePreset] = {
    preset.id: preset
    for preset in (
        FigurePreset(
            id="fig1",
            description="Heat currents vs T_H, weak coupling",
            base=_paper_base(),
            start=18.0,
            stop=40.0,
            g_fractions=(0.001,),
            outputs=("T_H",) + DEFAULT_OUTPUTS,
        ),
        FigurePreset(
            id="fig2",
            description="Efficiency vs T_H, weak coupling",
            base=_paper_base(),
            start=23.0,
            stop=40.0,
            g_fractions=(0.001,),
            outputs=("T_H", "eta"),
        ),
        FigurePreset(
            id="fig3",
            description="Cold current vs T_H for several couplings",
            base=_paper_base(),
            start=18.0,
            stop=100.0,
            g_fractions=(0.001, 0.1, 0.2, 0.25, 0.3, 0.35),
            outputs=("g", "T_H", "Qdot_C"),
        ),
        FigurePreset(
            id="fig4",
            description="Heat currents vs T_H, strong coupling g = 0.3 omega_H",
            base=_paper_base(),
            start=18.0,
            stop=200.0,
            g_fractions=(0.3,),
            outputs=("T_H",) + DEFAULT_OUTPUTS,
        ),
        FigurePreset(
            id="fig5",
            description="Efficiency vs T_H for several couplings",
            base=_paper_base(),
            start=18.0,
            stop=100.0,
            g_fractions=(0.001, 0.1, 0.15, 0.2, 0.25, 0.3),
            outputs=("g", "T_H", "eta"),
        ),
        FigurePreset(
            id="fig6",
            description="Cold current vs T_H with omega_C/T_C = omega_R/T_R",
            base=_paper_base(T_C=10.0, T_R=40.0, T_H=100.0),
            start=41.0,
            stop=200.0,
            g_fractions=(0.001, 0.1, 0.2, 0.3, 0.4, 0.5),
            outputs=("g", "T_H", "Qdot_C"),
        ),
    )
}


def get_preset(figure_id: str) -> FigurePreset:
    try:
        return FIGURE_PRESETS[figure_id]
    except KeyError:
        raise KeyError(
            f"Unknown figure '{figure_id}', choose from {sorted(FIGURE_PRESETS)}"
        ) from None
