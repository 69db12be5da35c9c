"""
Heat currents, efficiency, virtual temperature and entropy production

Sign convention: Qdot_mu = Tr{H_S L_mu[rho]} is positive when heat flows from
reservoir mu into the machine, so Qdot_C > 0 means the cold bath is cooled.
"""
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, Mapping, Optional

import numpy as np

from src.refrigerator.eigenoperators import verify_commutators
from src.refrigerator.liouvillian import GeneratorContext, apply_dissipator
from src.refrigerator.model import Bath, ModelParams
from src.refrigerator.steady_state import PopulationVector, steady_state_full
from src.shared.exceptions import FormMismatch, SecondLawViolation
from src.shared.logging import get_logger

logger = get_logger(__name__)

FORM_RTOL = 1e-10
EFFICIENCY_FLOOR = 1e-14
SECOND_LAW_LIMIT = -1e-8
VIRTUAL_DENOMINATOR_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class SteadyReport:
    """Thermodynamic summary of one stationary state"""

    params: ModelParams
    populations: PopulationVector
    q_dot: Dict[Bath, float]
    efficiency: Optional[float]
    t_virtual: float
    entropy_production: float
    diagnostics: Dict[str, float] = field(default_factory=dict)

    @property
    def is_refrigerator(self) -> bool:
        return self.q_dot[Bath.C] > 0

    @property
    def first_law_residual(self) -> float:
        return float(sum(self.q_dot.values()))

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready representation (undefined values become None)"""
        return {
            "params": {**self.params.model_dump(), "omega_R": self.params.omega_R},
            "populations": [float(x) for x in self.populations.values],
            "q_dot": {bath.value: value for bath, value in self.q_dot.items()},
            "efficiency": self.efficiency,
            "refrigerator": self.is_refrigerator,
            "t_virtual": self.t_virtual if math.isfinite(self.t_virtual) else None,
            "entropy_production": self.entropy_production,
            "diagnostics": dict(self.diagnostics),
        }


def heat_current(
    bath: Bath,
    populations: PopulationVector,
    m_bath: np.ndarray,
    context: GeneratorContext,
) -> float:
    """
    Qdot_mu in both forms: Tr{H_S L_mu[rho]} and <eps| M_mu |rho>

    Returns:
        The vector form

    Raises:
        FormMismatch: The two forms differ by more than 1e-10 of the flux scale
    """
    eps = context.eigensystem.eigenvalues
    rho = populations.as_density_matrix()
    dissipated = apply_dissipator(bath, rho, context.operators, context.spectra)
    trace_form = float(np.real(np.trace(context.eigensystem.hamiltonian @ dissipated)))
    vector_form = float(eps @ m_bath @ populations.values)

    scale = float(np.max(np.abs(eps))) * float(np.max(np.abs(m_bath)))
    if abs(trace_form - vector_form) > FORM_RTOL * scale:
        raise FormMismatch(
            f"Qdot_{Bath(bath).value}: trace form {trace_form:.6e} != vector form {vector_form:.6e}"
        )
    return vector_form


def efficiency(q_dot: Mapping[Bath, float], scale: Optional[float] = None) -> Optional[float]:
    """
    Coefficient of performance Qdot_C / Qdot_H, any sign

    Returns:
        The ratio, or None when Qdot_H is numerically zero
    """
    if scale is None:
        scale = max(abs(v) for v in q_dot.values())
    if abs(q_dot[Bath.H]) <= EFFICIENCY_FLOOR * scale or q_dot[Bath.H] == 0:
        return None
    return q_dot[Bath.C] / q_dot[Bath.H]


def virtual_temperature(p: ModelParams) -> float:
    """
    T_v = omega_H / (omega_R/T_R - omega_C/T_C)

    Returns:
        T_v, negative when the denominator is negative, math.inf when it vanishes
    """
    room, cold = p.omega_R / p.T_R, p.omega_C / p.T_C
    denominator = room - cold
    if abs(denominator) <= VIRTUAL_DENOMINATOR_RTOL * max(room, cold):
        return math.inf
    return p.omega_H / denominator


def entropy_production(q_dot: Mapping[Bath, float], temperatures: Mapping[Bath, float]) -> float:
    """
    sigma = -sum_mu Qdot_mu / T_mu

    Raises:
        SecondLawViolation: sigma < -1e-8
    """
    sigma = -sum(q_dot[bath] / temperatures[bath] for bath in Bath)
    if sigma < SECOND_LAW_LIMIT:
        raise SecondLawViolation(f"Entropy production {sigma:.3e} is negative")
    return float(sigma)


def rwa_diagnostics(p: ModelParams, context: GeneratorContext) -> Dict[str, float]:
    """Coupling-to-damping ratios and the smallest Bohr-frequency gap over the largest gamma"""
    gammas = {bath: p.gamma(bath) for bath in Bath}
    frequencies = sorted(op.frequency for op in context.operators)
    gaps = [b - a for a, b in combinations(frequencies, 2) if b - a > 0]
    diagnostics = {f"g_over_gamma_{bath.value}": p.g / gamma for bath, gamma in gammas.items()}
    diagnostics["min_bohr_gap_over_gamma"] = (min(gaps) if gaps else 0.0) / max(gammas.values())
    return diagnostics


def analyze(p: ModelParams) -> SteadyReport:
    """
    Solve the stationary state and evaluate every thermodynamic observable

    Args:
        p: Model parameters (validated here)

    Returns:
        SteadyReport with currents, efficiency, T_v, sigma and diagnostics
    """
    result = steady_state_full(p)
    context = result.context
    commutator = verify_commutators(context.operators, context.eigensystem)

    q_dot = {
        bath: heat_current(bath, result.populations, result.literal.parts[bath], context)
        for bath in Bath
    }
    temperatures = {bath: p.temperature(bath) for bath in Bath}
    sigma = entropy_production(q_dot, temperatures)

    largest = max(abs(v) for v in q_dot.values())
    diagnostics = {
        **result.diagnostics,
        "commutator_residual": commutator,
        "first_law_residual": float(sum(q_dot.values())),
        "first_law_relative": float(abs(sum(q_dot.values())) / largest) if largest else 0.0,
        **rwa_diagnostics(p, context),
    }
    return SteadyReport(
        params=p,
        populations=result.populations,
        q_dot=q_dot,
        efficiency=efficiency(q_dot),
        t_virtual=virtual_temperature(p),
        entropy_production=sigma,
        diagnostics=diagnostics,
    )
