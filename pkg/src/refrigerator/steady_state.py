"""
Population rate matrix and the stationary state

The 8x8 rate matrix M governs eigenbasis populations. It is assembled twice:
- literally, from Kronecker products of 2x2 rate blocks, projectors and
  controlled-NOT relabelings of the 3-bit population index;
- derived, by restricting the dissipators to diagonal states.
Both must agree before a steady state is trusted.
"""
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, Literal, Tuple

import numpy as np
from scipy import linalg

from src.refrigerator.eigenoperators import bohr_frequency
from src.refrigerator.liouvillian import (
    BathSpectrum,
    DensityMatrix,
    GeneratorContext,
    apply_generator,
    build_generator_context,
)
from src.refrigerator.model import DIMENSION, Bath, ModelParams
from src.shared.exceptions import (
    DegenerateKernel,
    NegativePopulation,
    OracleDisagreement,
)
from src.shared.logging import get_logger

logger = get_logger(__name__)

ORACLE_RTOL = 1e-10
STATIONARITY_RTOL = 1e-10
CLAMP_LIMIT = 1e-8
CONDITION_LIMIT = 1e12
COLUMN_SUM_RTOL = 1e-12

Provenance = Literal["literal", "derived"]

_ID = np.eye(2)
_P_PLUS = np.diag([1.0, 0.0])
_P_MINUS = np.diag([0.0, 1.0])


@dataclass(frozen=True, eq=False)
class PopulationVector:
    """Steady populations over lambda_1..lambda_8"""

    values: np.ndarray

    def __post_init__(self) -> None:
        self.values.setflags(write=False)

    def as_density_matrix(self) -> DensityMatrix:
        return DensityMatrix.from_populations(self.values)


@dataclass(frozen=True, eq=False)
class RateMatrix:
    """M = M_H + M_R + M_C with its per-bath parts"""

    matrix: np.ndarray
    provenance: Provenance
    parts: Dict[Bath, np.ndarray] = field(default_factory=dict)

    @property
    def column_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=0)

    def max_difference(self, other: "RateMatrix") -> float:
        return float(np.max(np.abs(self.matrix - other.matrix)))


def _kron(*factors: np.ndarray) -> np.ndarray:
    return reduce(np.kron, factors)


def cnot(control: int, target: int) -> np.ndarray:
    """
    8x8 permutation b_target -> b_target XOR b_control on the population index

    Qubits are numbered 1..3 from the most significant bit of 4*b_1 + 2*b_2 + b_3.
    """
    perm = np.zeros((DIMENSION, DIMENSION))
    for index in range(DIMENSION):
        bits = [(index >> (2 - k)) & 1 for k in range(3)]
        bits[target - 1] ^= bits[control - 1]
        image = (bits[0] << 2) | (bits[1] << 1) | bits[2]
        perm[image, index] = 1.0
    return perm


def _rate_block(spectrum: BathSpectrum, j: int, signed_frequency: float) -> np.ndarray:
    """2x2 block [[-J(-w), J(w)], [J(-w), -J(w)]] at the signed frequency"""
    j_plus, j_minus = spectrum.pair(j)
    if signed_frequency < 0:
        # spectra hold |w|; J(w) and J(-w) trade places for a negative listed frequency
        j_plus, j_minus = j_minus, j_plus
    return np.array([[-j_minus, j_plus], [j_minus, -j_plus]])


def build_rate_matrix_literal(
    p: ModelParams, spectra: Dict[Bath, BathSpectrum]
) -> RateMatrix:
    """
    Assemble M from the closed-form Kronecker expressions

    Args:
        p: Model parameters (supplies the signed Bohr frequencies)
        spectra: Rates at the canonical frequencies

    Returns:
        RateMatrix with provenance 'literal' and parts M_H, M_R, M_C
    """

    def block(bath: Bath, j: int) -> np.ndarray:
        return _rate_block(spectra[bath], j, bohr_frequency(p, bath, j))

    equal = _kron(_P_PLUS, _P_PLUS) + _kron(_P_MINUS, _P_MINUS)
    unequal = _kron(_P_PLUS, _P_MINUS) + _kron(_P_MINUS, _P_PLUS)
    c23, c13, c21 = cnot(2, 3), cnot(1, 3), cnot(2, 1)

    j_h = [block(Bath.H, j) for j in (1, 2, 3)]
    j_r = [block(Bath.R, j) for j in (1, 2, 3)]
    j_c = [block(Bath.C, j) for j in (1, 2, 3)]

    m_h = (
        2.0 * _kron(j_h[0], equal)
        + c23 @ _kron(_ID, j_h[1], _P_MINUS) @ c23.T
        + _kron(j_h[2], unequal)
    )
    m_r = (
        _kron(_P_PLUS, j_r[0], _P_PLUS)
        + _kron(_P_MINUS, j_r[0], _P_MINUS)
        + 2.0 * (_kron(_P_PLUS, j_r[1], _P_MINUS) + _kron(_P_MINUS, j_r[1], _P_PLUS))
        + c13 @ _kron(j_r[2], _ID, _P_PLUS) @ c13.T
    )
    m_c = (
        c21 @ _kron(_P_MINUS, j_c[0], _ID) @ c21.T
        + _kron(unequal, j_c[1])
        + 2.0 * _kron(equal, j_c[2])
    )

    parts = {Bath.H: m_h, Bath.R: m_r, Bath.C: m_c}
    return RateMatrix(matrix=m_h + m_r + m_c, provenance="literal", parts=parts)


def build_rate_matrix_derived(context: GeneratorContext) -> RateMatrix:
    """
    Restrict the dissipators to diagonal states

    A term |a><b| with amplitude c moves population b -> a at 2|c|^2 J(-w)
    and a -> b at 2|c|^2 J(w), with the matching diagonal losses.
    """
    parts = {bath: np.zeros((DIMENSION, DIMENSION)) for bath in Bath}
    for op in context.operators:
        j_plus, j_minus = context.spectra[op.bath].pair(op.j)
        m = parts[op.bath]
        for a, b, amplitude in op.transitions():
            weight = 2.0 * abs(amplitude) ** 2
            m[a, b] += weight * j_minus
            m[b, b] -= weight * j_minus
            m[b, a] += weight * j_plus
            m[a, a] -= weight * j_plus

    total = sum(parts.values())
    return RateMatrix(matrix=total, provenance="derived", parts=parts)


def solve_steady(rate_matrix: RateMatrix) -> PopulationVector:
    """
    Normalized kernel of M

    The last row of M is replaced by ones and M'x = e_last is solved; when
    M' is ill-conditioned the kernel comes from the SVD instead.

    Raises:
        DegenerateKernel: Kernel dimension differs from 1
        NegativePopulation: An entry is below -1e-8
    """
    m = np.asarray(rate_matrix.matrix, dtype=float)
    scale = float(np.max(np.abs(m))) or 1.0
    sums = np.max(np.abs(m.sum(axis=0)))
    if sums > COLUMN_SUM_RTOL * scale * DIMENSION:
        logger.warning(f"Rate matrix column sums deviate from zero by {sums:.3e}")

    rank = np.linalg.matrix_rank(m)
    if rank != DIMENSION - 1:
        raise DegenerateKernel(DIMENSION - rank)

    augmented = m.copy()
    augmented[-1, :] = 1.0
    rhs = np.zeros(DIMENSION)
    rhs[-1] = 1.0

    if np.linalg.cond(augmented) > CONDITION_LIMIT:
        logger.debug("Augmented rate matrix ill-conditioned, using the SVD kernel")
        x = linalg.null_space(m)[:, 0]
        x = x / x.sum()
    else:
        x = linalg.solve(augmented, rhs)
        # one refinement step with the residual accumulated in extended precision
        residual = augmented.astype(np.longdouble) @ x.astype(np.longdouble) - rhs
        x = x - linalg.solve(augmented, np.asarray(residual, dtype=float))

    if np.min(x) < -CLAMP_LIMIT:
        raise NegativePopulation(f"Steady population {np.min(x):.3e} is negative")
    x = np.where(x < 0.0, 0.0, x)
    return PopulationVector(values=x / x.sum())


@dataclass(frozen=True, eq=False)
class SteadyStateResult:
    """Steady populations with the objects and checks that produced them"""

    populations: PopulationVector
    context: GeneratorContext
    literal: RateMatrix
    derived: RateMatrix
    diagnostics: Dict[str, float]

    @property
    def density_matrix(self) -> DensityMatrix:
        return self.populations.as_density_matrix()


def compare_rate_matrices(literal: RateMatrix, derived: RateMatrix) -> Tuple[float, float]:
    """Absolute and scale-relative max entrywise difference"""
    absolute = literal.max_difference(derived)
    scale = float(np.max(np.abs(literal.matrix))) or 1.0
    return absolute, absolute / scale


def steady_state_full(p: ModelParams) -> SteadyStateResult:
    """
    End-to-end stationary state with both oracles checked

    Raises:
        OracleDisagreement: Literal and derived M differ, or the full generator
            does not vanish on the diagonal steady state
    """
    context = build_generator_context(p)
    literal = build_rate_matrix_literal(p, context.spectra)
    derived = build_rate_matrix_derived(context)

    absolute, relative = compare_rate_matrices(literal, derived)
    if relative > ORACLE_RTOL:
        raise OracleDisagreement(
            f"Literal and derived rate matrices differ by {absolute:.3e} (relative {relative:.3e})"
        )

    populations = solve_steady(literal)
    rho = populations.as_density_matrix()
    rate_scale = float(np.max(np.abs(literal.matrix)))
    residual = float(np.linalg.norm(apply_generator(rho, context)))
    if residual > STATIONARITY_RTOL * max(rate_scale, 1.0):
        raise OracleDisagreement(f"Generator residual {residual:.3e} on the steady state")

    diagnostics = {
        "rate_matrix_difference": absolute,
        "stationarity_residual": residual,
        "column_sum_residual": float(np.max(np.abs(literal.column_sums))),
    }
    logger.debug(f"Steady state for {p.model_dump()}: {populations.values}")
    return SteadyStateResult(
        populations=populations,
        context=context,
        literal=literal,
        derived=derived,
        diagnostics=diagnostics,
    )
