"""
Refrigerator parameters, system Hamiltonian and its analytic eigensystem

Natural units throughout (hbar = k_B = 1). Tensor slots are ordered (H, R, C)
and each qubit lists its excited state first, so the product basis index is
4*b_H + 2*b_R + b_C (0-based) with b = 0 for |e> and b = 1 for |g>.
"""
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import linalg

from src.shared.exceptions import (
    DegenerateBohrFrequency,
    EigenvalueMismatch,
    NonPositiveParameter,
)
from src.shared.logging import get_logger

logger = get_logger(__name__)

DIMENSION = 8
DEGENERACY_RTOL = 1e-12
SPECTRUM_RTOL = 1e-10
RESIDUAL_RTOL = 1e-12


class Bath(str, Enum):
    """Reservoir label; each bath couples to the qubit of the same name"""

    H = "H"
    R = "R"
    C = "C"


# Tensor slot of each qubit in the product basis
SLOT = {Bath.H: 0, Bath.R: 1, Bath.C: 2}


class ModelParams(BaseModel):
    """Complete experiment description; omega_R is always omega_H + omega_C"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    omega_H: float
    omega_C: float
    g: float
    T_H: float
    T_R: float
    T_C: float
    gamma_H: float
    gamma_R: float
    gamma_C: float

    @property
    def omega_R(self) -> float:
        return self.omega_H + self.omega_C

    def frequency(self, bath: Bath) -> float:
        return {Bath.H: self.omega_H, Bath.R: self.omega_R, Bath.C: self.omega_C}[Bath(bath)]

    def temperature(self, bath: Bath) -> float:
        return {Bath.H: self.T_H, Bath.R: self.T_R, Bath.C: self.T_C}[Bath(bath)]

    def gamma(self, bath: Bath) -> float:
        return {Bath.H: self.gamma_H, Bath.R: self.gamma_R, Bath.C: self.gamma_C}[Bath(bath)]

    def with_updates(self, **changes: float) -> "ModelParams":
        """Copy with some fields replaced (re-validated by pydantic)"""
        return ModelParams(**{**self.model_dump(), **changes})

    def warnings(self) -> List[str]:
        """Soft findings: the machine is only a refrigerator candidate when T_H > T_R > T_C"""
        found = []
        if not self.T_H > self.T_R:
            found.append(f"T_H={self.T_H} is not above T_R={self.T_R}")
        if not self.T_R > self.T_C:
            found.append(f"T_R={self.T_R} is not above T_C={self.T_C}")
        return found


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Eigenvalues in the fixed order [w_R, w_H, g, -w_C, w_C, -g, -w_H, -w_R] and their vectors"""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def scale(self) -> float:
        """omega_H, which sits at index 1 of the ordered spectrum"""
        return float(self.eigenvalues[1])

    @property
    def hamiltonian(self) -> np.ndarray:
        """H_S in its own eigenbasis"""
        return np.diag(self.eigenvalues).astype(complex)

    def to_product_basis(self, operator: np.ndarray) -> np.ndarray:
        """Rotate an eigenbasis operator into the computational product basis"""
        u = self.eigenvectors
        return u @ operator @ u.conj().T

    def to_eigenbasis(self, operator: np.ndarray) -> np.ndarray:
        """Rotate a product-basis operator into the eigenbasis of H_S"""
        u = self.eigenvectors
        return u.conj().T @ operator @ u


def validate_params(p: ModelParams) -> ModelParams:
    """
    Enforce the hard model constraints and report the soft ones

    Args:
        p: Candidate parameters

    Returns:
        The same parameters, unchanged

    Raises:
        NonPositiveParameter: Any frequency, coupling, temperature or rate <= 0
        DegenerateBohrFrequency: g coincides with omega_C, omega_H or omega_R
    """
    for name in ("omega_H", "omega_C", "g", "T_H", "T_R", "T_C", "gamma_H", "gamma_R", "gamma_C"):
        value = getattr(p, name)
        if not np.isfinite(value) or value <= 0:
            raise NonPositiveParameter(name, value)

    for name, frequency in (("omega_C", p.omega_C), ("omega_H", p.omega_H), ("omega_R", p.omega_R)):
        if abs(p.g - frequency) <= DEGENERACY_RTOL * frequency:
            raise DegenerateBohrFrequency(p.g, name, frequency)

    for message in p.warnings():
        logger.warning(f"Temperature ordering: {message}; the machine may heat the cold bath")

    return p


# Single-qubit operators with |e> first
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.T.copy()
SIGMA_X = SIGMA_PLUS + SIGMA_MINUS
IDENTITY_2 = np.eye(2, dtype=complex)


def embed(operator: np.ndarray, bath: Bath) -> np.ndarray:
    """Place a single-qubit operator on the slot of the given bath's qubit"""
    factors = [IDENTITY_2] * 3
    factors[SLOT[Bath(bath)]] = operator
    return reduce(np.kron, factors)


def build_hamiltonian(p: ModelParams) -> np.ndarray:
    """
    Build H_S = sum_mu (omega_mu / 2) sigma_mu^z + g (s_H^+ s_R^- s_C^+ + h.c.)

    Args:
        p: Model parameters

    Returns:
        Complex 8x8 matrix in the product basis
    """
    h0 = sum(0.5 * p.frequency(bath) * embed(SIGMA_Z, bath) for bath in Bath)
    exchange = reduce(np.kron, [SIGMA_PLUS, SIGMA_MINUS, SIGMA_PLUS])
    h_int = p.g * (exchange + exchange.conj().T)
    return np.asarray(h0 + h_int, dtype=complex)


def analytic_spectrum(p: ModelParams) -> np.ndarray:
    """Eigenvalues in the fixed order used throughout"""
    return np.array(
        [p.omega_R, p.omega_H, p.g, -p.omega_C, p.omega_C, -p.g, -p.omega_H, -p.omega_R]
    )


def _analytic_eigenvectors() -> np.ndarray:
    """
    Columns are |lambda_i> in the product basis

    Six are product states; lambda_3 and lambda_6 are the dressed pair
    (|e_H g_R e_C> +/- |g_H e_R g_C>)/sqrt(2), with '+' carrying +g.
    """
    u = np.zeros((DIMENSION, DIMENSION), dtype=complex)
    # eigen index -> product index, for the undressed states
    product_columns: Tuple[Tuple[int, int], ...] = ((0, 0), (1, 1), (3, 3), (4, 4), (6, 6), (7, 7))
    for column, product in product_columns:
        u[product, column] = 1.0
    root_half = 1.0 / np.sqrt(2.0)
    u[2, 2], u[5, 2] = root_half, root_half
    u[2, 5], u[5, 5] = root_half, -root_half
    return u


def eigensystem(h_s: np.ndarray, p: ModelParams) -> EigenSystem:
    """
    Produce the analytic eigensystem and cross-check it numerically

    Args:
        h_s: Hamiltonian from build_hamiltonian
        p: The parameters it was built from

    Returns:
        EigenSystem with the ordered spectrum and real-phase eigenvectors

    Raises:
        EigenvalueMismatch: Numerical spectrum or eigen-residual disagrees
    """
    eigenvalues = analytic_spectrum(p)
    eigenvectors = _analytic_eigenvectors()

    numeric = np.sort(linalg.eigvalsh(h_s))
    expected = np.sort(eigenvalues)
    norm = max(float(np.max(np.abs(expected))), 1.0)
    if np.max(np.abs(numeric - expected)) > SPECTRUM_RTOL * norm:
        raise EigenvalueMismatch(f"Numerical spectrum {numeric} != analytic {expected}")

    residual = np.linalg.norm(
        h_s @ eigenvectors - eigenvectors * eigenvalues[np.newaxis, :], axis=0
    )
    h_norm = np.linalg.norm(h_s, 2)
    if np.max(residual) > RESIDUAL_RTOL * h_norm:
        worst = int(np.argmax(residual))
        raise EigenvalueMismatch(
            f"|H_S lambda_{worst + 1} - eps lambda_{worst + 1}| = {residual[worst]:.3e}"
        )

    eigenvalues.setflags(write=False)
    eigenvectors.setflags(write=False)
    return EigenSystem(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def gibbs_populations(es: EigenSystem, temperature: float) -> np.ndarray:
    """Boltzmann weights exp(-eps_i / T) normalized over the eigenbasis"""
    shifted = -(es.eigenvalues - np.min(es.eigenvalues)) / temperature
    weights = np.exp(shifted)
    return weights / weights.sum()
