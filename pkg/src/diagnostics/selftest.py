"""
Self-test suite: structural identities, both rate-matrix oracles,
thermodynamic laws and the time-evolution cross-check
"""
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from src.refrigerator.eigenoperators import coupling_decomposition, verify_commutators
from src.refrigerator.liouvillian import (
    DensityMatrix,
    build_generator_context,
    evolve,
    relaxation_gap,
)
from src.refrigerator.model import (
    SIGMA_X,
    Bath,
    ModelParams,
    build_hamiltonian,
    embed,
    gibbs_populations,
)
from src.refrigerator.steady_state import (
    build_rate_matrix_derived,
    build_rate_matrix_literal,
    compare_rate_matrices,
    solve_steady,
)
from src.refrigerator.thermo import analyze
from src.shared.exceptions import RefrigeratorError
from src.shared.logging import get_logger

logger = get_logger(__name__)

ORACLE_RTOL = 1e-12
DECOMPOSITION_TOL = 1e-12
GIBBS_TOL = 1e-10
EVOLVE_TRACE_DISTANCE = 1e-7
SECOND_LAW_FLOOR = -1e-12
FIRST_LAW_RTOL = 1e-9
DEGENERACY_MARGIN = 0.05


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SelftestReport:
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]


def reference_params() -> ModelParams:
    """Weak-coupling refrigerator point with omega_H = 3, omega_C = 1"""
    gamma = 0.003
    return ModelParams(
        omega_H=3.0,
        omega_C=1.0,
        g=0.003,
        T_H=30.0,
        T_R=21.0,
        T_C=18.0,
        gamma_H=gamma,
        gamma_R=gamma,
        gamma_C=gamma,
    )


def relaxation_params() -> ModelParams:
    """Strongly damped point whose transient dies out quickly enough to integrate"""
    gamma = 0.05
    return ModelParams(
        omega_H=3.0,
        omega_C=1.0,
        g=0.6,
        T_H=40.0,
        T_R=21.0,
        T_C=18.0,
        gamma_H=gamma,
        gamma_R=gamma,
        gamma_C=gamma,
    )


def random_params(rng: np.random.Generator) -> ModelParams:
    """
    Draw parameters away from the degenerate couplings g = omega_C, omega_H, omega_R

    Args:
        rng: Numpy random generator

    Returns:
        ModelParams with every Bohr frequency at least 0.05 from zero
    """
    omega_h = rng.uniform(1.0, 5.0)
    omega_c = rng.uniform(0.2, 2.0)
    omega_r = omega_h + omega_c
    while True:
        g = rng.uniform(0.001, omega_r - DEGENERACY_MARGIN)
        if abs(g - omega_c) > DEGENERACY_MARGIN and abs(g - omega_h) > DEGENERACY_MARGIN:
            break
    t_c, t_r, t_h = np.sort(rng.uniform(1.0, 100.0, size=3))
    gammas = 10.0 ** rng.uniform(-4.0, -1.0, size=3)
    return ModelParams(
        omega_H=omega_h,
        omega_C=omega_c,
        g=g,
        T_H=t_h,
        T_R=t_r,
        T_C=t_c,
        gamma_H=gammas[0],
        gamma_R=gammas[1],
        gamma_C=gammas[2],
    )


def check_structure(p: ModelParams) -> List[CheckResult]:
    h_s = build_hamiltonian(p)
    hermitian = float(np.max(np.abs(h_s - h_s.conj().T)))
    context = build_generator_context(p)
    commutator = verify_commutators(context.operators, context.eigensystem)

    results = [
        CheckResult("hamiltonian_hermitian", hermitian == 0.0, f"max|H - H^+| = {hermitian:.1e}"),
        CheckResult("eigensystem", True, "analytic spectrum and vectors confirmed"),
        CheckResult("commutators", True, f"max residual {commutator:.1e}"),
    ]
    for bath in Bath:
        total = coupling_decomposition(context.operators, context.eigensystem, bath)
        error = float(np.max(np.abs(total - embed(SIGMA_X, bath))))
        results.append(
            CheckResult(
                f"coupling_decomposition_{bath.value}",
                error <= DECOMPOSITION_TOL,
                f"max|sum_j (V + V^+) - sigma^x| = {error:.1e}",
            )
        )
    return results


def check_rate_oracles(draws: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        p = random_params(rng)
        context = build_generator_context(p, validate=False)
        literal = build_rate_matrix_literal(p, context.spectra)
        derived = build_rate_matrix_derived(context)
        _, relative = compare_rate_matrices(literal, derived)
        worst = max(worst, relative)
    return CheckResult(
        "rate_matrix_oracles",
        worst <= ORACLE_RTOL,
        f"{draws} draws, worst relative difference {worst:.1e}",
    )


def check_laws(p: ModelParams) -> List[CheckResult]:
    report = analyze(p)
    largest = max(abs(v) for v in report.q_dot.values())
    first = abs(report.first_law_residual)
    return [
        CheckResult(
            "first_law",
            first <= FIRST_LAW_RTOL * largest,
            f"|sum Qdot| = {first:.1e} against max|Qdot| = {largest:.1e}",
        ),
        CheckResult(
            "second_law",
            report.entropy_production >= SECOND_LAW_FLOOR,
            f"sigma = {report.entropy_production:.3e}",
        ),
    ]


def check_gibbs(p: ModelParams, temperature: float = 20.0) -> CheckResult:
    equal = p.with_updates(T_H=temperature, T_R=temperature, T_C=temperature)
    context = build_generator_context(equal, validate=False)
    populations = solve_steady(build_rate_matrix_literal(equal, context.spectra)).values
    expected = gibbs_populations(context.eigensystem, temperature)
    error = float(np.max(np.abs(populations - expected)))
    return CheckResult(
        "gibbs_at_equal_temperatures", error <= GIBBS_TOL, f"max deviation {error:.1e}"
    )


def check_evolution(p: ModelParams, max_steps: int = 200_000) -> CheckResult:
    """Integrate from the maximally mixed state long enough to shrink the transient by e^-20"""
    context = build_generator_context(p)
    dt = 0.05 / max(context.max_rate, 1.0)
    gap = relaxation_gap(context)
    steps = min(max_steps, int(math.ceil(20.0 / (gap * dt))))
    result = evolve(DensityMatrix.maximally_mixed(), context, steps=steps, dt=dt)

    stationary = solve_steady(build_rate_matrix_literal(p, context.spectra)).values
    distance = result.final.trace_distance(DensityMatrix.from_populations(stationary))
    return CheckResult(
        "evolution_oracle",
        distance <= EVOLVE_TRACE_DISTANCE,
        f"{steps} RK4 steps of dt={dt:.3g}: trace distance {distance:.1e}",
    )


def _guarded(name: str, check: Callable[[], object]) -> List[CheckResult]:
    try:
        outcome = check()
    except RefrigeratorError as e:
        return [CheckResult(name, False, f"{type(e).__name__}: {e}")]
    return outcome if isinstance(outcome, list) else [outcome]


def run_selftest(
    draws: int = 100,
    seed: int = 0,
    include_evolution: bool = True,
    params: Optional[ModelParams] = None,
) -> SelftestReport:
    """
    Run every self-check

    Args:
        draws: Random parameter draws for the rate-matrix oracle
        seed: Seed for those draws
        include_evolution: Also run the (slower) time-evolution oracle
        params: Operating point for the structural and law checks

    Returns:
        SelftestReport; numerical failures are recorded, never raised
    """
    p = params or reference_params()
    report = SelftestReport()
    report.results.extend(_guarded("structure", lambda: check_structure(p)))
    report.results.extend(_guarded("rate_matrix_oracles", lambda: check_rate_oracles(draws, seed)))
    report.results.extend(_guarded("laws", lambda: check_laws(p)))
    report.results.extend(_guarded("gibbs_at_equal_temperatures", lambda: check_gibbs(p)))
    if include_evolution:
        report.results.extend(
            _guarded("evolution_oracle", lambda: check_evolution(relaxation_params()))
        )

    for result in report.results:
        level = logger.info if result.passed else logger.error
        level(f"{'PASS' if result.passed else 'FAIL'} {result.name}: {result.detail}")
    return report
