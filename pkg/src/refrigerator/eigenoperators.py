"""
Bath eigenoperators V_{mu j} of the refrigerator Hamiltonian

Each operator is stored in the eigenbasis of H_S as a sparse two-entry matrix.
The closed-form table below is the decomposition of sigma_mu^- into
transitions between eigenstates, grouped by Bohr frequency.
"""
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.refrigerator.model import DIMENSION, Bath, EigenSystem, ModelParams
from src.shared.exceptions import CommutatorViolation, ZeroFrequency
from src.shared.logging import get_logger

logger = get_logger(__name__)

ZERO_FREQUENCY_RTOL = 1e-12
COMMUTATOR_RTOL = 1e-10

# Numeric bath index used in the V_{mu j} labels
BATH_BY_INDEX: Dict[int, Bath] = {1: Bath.H, 2: Bath.R, 3: Bath.C}

_HALF = 1.0 / np.sqrt(2.0)

# (bath, j) -> (sign of g in w = omega_mu + sign*g, [(row, col, amplitude)]).
# Indices are 1-based lambda labels.
# V_C3 carries unit amplitude: sigma_C^- maps |lambda_1> to |lambda_2> and |lambda_7> to
# |lambda_8> without dressing.
EIGENOPERATOR_TABLE: Dict[Tuple[Bath, int], Tuple[int, Tuple[Tuple[int, int, float], ...]]] = {
    (Bath.H, 1): (0, ((5, 1, 1.0), (8, 4, 1.0))),
    (Bath.H, 2): (-1, ((3, 2, _HALF), (7, 6, _HALF))),
    (Bath.H, 3): (+1, ((7, 3, _HALF), (6, 2, -_HALF))),
    (Bath.R, 1): (-1, ((3, 1, _HALF), (8, 6, -_HALF))),
    (Bath.R, 2): (0, ((4, 2, 1.0), (7, 5, 1.0))),
    (Bath.R, 3): (+1, ((8, 3, _HALF), (6, 1, _HALF))),
    (Bath.C, 1): (-1, ((3, 5, _HALF), (4, 6, _HALF))),
    (Bath.C, 2): (+1, ((4, 3, _HALF), (6, 5, -_HALF))),
    (Bath.C, 3): (0, ((2, 1, 1.0), (8, 7, 1.0))),
}


@dataclass(frozen=True, eq=False)
class EigenOperator:
    """One V_{mu j}: lowers the system energy by `frequency` (> 0 once canonical)"""

    bath: Bath
    j: int
    frequency: float
    matrix: np.ndarray
    adjointed: bool = False

    @property
    def label(self) -> str:
        return f"V_{self.bath.value}{self.j}"

    @property
    def dagger(self) -> np.ndarray:
        return self.matrix.conj().T

    def transitions(self) -> List[Tuple[int, int, complex]]:
        """Nonzero entries as (row, col, amplitude), 0-based; col decays into row"""
        rows, cols = np.nonzero(self.matrix)
        return [(int(r), int(c), complex(self.matrix[r, c])) for r, c in zip(rows, cols)]

    def in_product_basis(self, es: EigenSystem) -> np.ndarray:
        return es.to_product_basis(self.matrix)


def bohr_frequency(p: ModelParams, bath: Bath, j: int) -> float:
    """Signed frequency w_{mu j} as listed in the closed-form table (may be negative)"""
    g_sign, _ = EIGENOPERATOR_TABLE[(Bath(bath), j)]
    return p.frequency(bath) + g_sign * p.g


def _raw_matrix(entries: Sequence[Tuple[int, int, float]]) -> np.ndarray:
    matrix = np.zeros((DIMENSION, DIMENSION), dtype=complex)
    for row, col, amplitude in entries:
        matrix[row - 1, col - 1] = amplitude
    return matrix


def build_eigenoperators(es: EigenSystem, p: ModelParams) -> List[EigenOperator]:
    """
    Build the nine eigenoperators, canonicalized to positive frequency

    An operator whose listed frequency is negative (omega_C - g when g > omega_C)
    is replaced by its adjoint with frequency |w|.

    Args:
        es: Eigensystem of H_S
        p: Model parameters

    Returns:
        Operators ordered H1..H3, R1..R3, C1..C3

    Raises:
        ZeroFrequency: A Bohr frequency vanishes
    """
    operators = []
    for (bath, j), (_, entries) in EIGENOPERATOR_TABLE.items():
        frequency = bohr_frequency(p, bath, j)
        if abs(frequency) <= ZERO_FREQUENCY_RTOL * es.scale:
            raise ZeroFrequency(f"V_{bath.value}{j} has Bohr frequency {frequency!r}")

        matrix = _raw_matrix(entries)
        adjointed = frequency < 0
        if adjointed:
            logger.debug(f"V_{bath.value}{j}: w={frequency:.6g} < 0, using the adjoint")
            matrix = matrix.conj().T.copy()
            frequency = -frequency

        matrix.setflags(write=False)
        operators.append(
            EigenOperator(bath=bath, j=j, frequency=frequency, matrix=matrix, adjointed=adjointed)
        )
    return operators


def operators_for(ops: Sequence[EigenOperator], bath: Bath) -> List[EigenOperator]:
    """Operators of one bath in j order"""
    return [op for op in ops if op.bath == Bath(bath)]


def commutator_residual(op: EigenOperator, es: EigenSystem) -> float:
    """|| [H_S, V] + w V || in the eigenbasis"""
    h = es.hamiltonian
    return float(np.linalg.norm(h @ op.matrix - op.matrix @ h + op.frequency * op.matrix))


def verify_commutators(ops: Sequence[EigenOperator], es: EigenSystem) -> float:
    """
    Check [H_S, V] = -w V for every operator

    Returns:
        Largest residual over all operators

    Raises:
        CommutatorViolation: Residual exceeds 1e-10 * omega_H
    """
    worst = 0.0
    for op in ops:
        residual = commutator_residual(op, es)
        if residual > COMMUTATOR_RTOL * es.scale:
            raise CommutatorViolation(op.bath.value, op.j, residual)
        worst = max(worst, residual)
    logger.debug(f"Commutator check passed for {len(ops)} operators (max residual {worst:.3e})")
    return worst


def coupling_decomposition(ops: Sequence[EigenOperator], es: EigenSystem, bath: Bath) -> np.ndarray:
    """Sum_j U (V + V^dagger) U^dagger, which should reproduce sigma_mu^x"""
    total = np.zeros((DIMENSION, DIMENSION), dtype=complex)
    for op in operators_for(ops, bath):
        total += op.in_product_basis(es) + es.to_product_basis(op.dagger)
    return total
