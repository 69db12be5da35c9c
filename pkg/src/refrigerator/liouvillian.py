"""
Spectral densities, dissipators and the full master-equation generator

All operators live in the eigenbasis of H_S. Each bath contributes
L_mu[rho] = sum_j J(-w)[2 V rho V^+ - V^+V rho - rho V^+V]
                + J(w)[2 V^+ rho V - V V^+ rho - rho V V^+]
and the generator adds the Hamiltonian commutator -i[H_S, rho].
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from src.refrigerator.eigenoperators import (
    EigenOperator,
    build_eigenoperators,
    operators_for,
)
from src.refrigerator.model import (
    DIMENSION,
    Bath,
    EigenSystem,
    ModelParams,
    build_hamiltonian,
    eigensystem,
    gibbs_populations,
    validate_params,
)
from src.shared.exceptions import DomainError, InvalidDensityMatrix, StepSizeUnstable
from src.shared.logging import get_logger

logger = get_logger(__name__)

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-10
TRACE_DRIFT_LIMIT = 1e-6
# Real-axis stability limit of classic RK4
RK4_STABILITY = 2.78


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """8x8 state in the H_S eigenbasis"""

    matrix: np.ndarray

    @classmethod
    def from_populations(cls, populations: Sequence[float]) -> "DensityMatrix":
        return cls(np.diag(np.asarray(populations, dtype=float)).astype(complex))

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix":
        return cls(np.eye(DIMENSION, dtype=complex) / DIMENSION)

    @classmethod
    def gibbs(cls, es: EigenSystem, temperature: float) -> "DensityMatrix":
        return cls.from_populations(gibbs_populations(es, temperature))

    @property
    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.matrix)).copy()

    @property
    def coherence_norm(self) -> float:
        """Frobenius norm of the off-diagonal part"""
        off_diagonal = self.matrix - np.diag(np.diag(self.matrix))
        return float(np.linalg.norm(off_diagonal))

    def validate(self) -> "DensityMatrix":
        """
        Check Hermiticity, unit trace and positivity

        Raises:
            InvalidDensityMatrix: Any of the three fails
        """
        m = self.matrix
        if m.shape != (DIMENSION, DIMENSION):
            raise InvalidDensityMatrix(f"Expected an 8x8 matrix, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise InvalidDensityMatrix("Matrix is not Hermitian")
        trace = np.trace(m)
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvalidDensityMatrix(f"Trace is {trace}, expected 1")
        smallest = float(np.min(linalg.eigvalsh(0.5 * (m + m.conj().T))))
        if smallest < -POSITIVITY_TOL:
            raise InvalidDensityMatrix(f"Smallest eigenvalue {smallest:.3e} is negative")
        return self

    def trace_distance(self, other: Union["DensityMatrix", np.ndarray]) -> float:
        difference = self.matrix - _as_array(other)
        hermitian = 0.5 * (difference + difference.conj().T)
        return 0.5 * float(np.sum(np.abs(linalg.eigvalsh(hermitian))))


@dataclass(frozen=True)
class BathSpectrum:
    """Occupations and rates of one bath at its three (canonical) Bohr frequencies"""

    bath: Bath
    temperature: float
    gamma: float
    frequencies: Tuple[float, ...]
    occupations: Tuple[float, ...]
    j_plus: Tuple[float, ...]
    j_minus: Tuple[float, ...]

    def pair(self, j: int) -> Tuple[float, float]:
        """(J(w), J(-w)) for operator j (1-based)"""
        return self.j_plus[j - 1], self.j_minus[j - 1]


def _as_array(rho: Union[DensityMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


def mean_occupation(w: float, temperature: float) -> float:
    """
    Bose occupation 1/(exp(w/T) - 1)

    Evaluated as exp(-x)/(1 - exp(-x)) with expm1 so both the frozen-bath limit
    (underflow to 0) and the classical limit (x -> 0) stay accurate.

    Raises:
        DomainError: w <= 0 or T <= 0
    """
    if not w > 0:
        raise DomainError(f"Bohr frequency must be > 0, got {w!r}")
    if not temperature > 0:
        raise DomainError(f"Temperature must be > 0, got {temperature!r}")
    x = w / temperature
    return float(np.exp(-x) / -np.expm1(-x))


def spectral_pair(w: float, temperature: float, gamma: float) -> Tuple[float, float]:
    """
    Absorption and emission rates at frequency w

    Returns:
        (J(w), J(-w)) = (gamma * n, gamma * (n + 1))
    """
    if not gamma > 0:
        raise DomainError(f"Decay rate must be > 0, got {gamma!r}")
    occupation = mean_occupation(w, temperature)
    return gamma * occupation, gamma * (occupation + 1.0)


def spectral_density(x: float, temperature: float, gamma: float) -> float:
    """J at a signed frequency: gamma*n(x) for x > 0, gamma*(n(|x|) + 1) for x < 0"""
    j_plus, j_minus = spectral_pair(abs(x), temperature, gamma)
    return j_plus if x > 0 else j_minus


def build_spectra(ops: Sequence[EigenOperator], p: ModelParams) -> Dict[Bath, BathSpectrum]:
    """Evaluate occupations and rates for every bath at its operators' frequencies"""
    spectra = {}
    for bath in Bath:
        bath_ops = operators_for(ops, bath)
        temperature, gamma = p.temperature(bath), p.gamma(bath)
        frequencies = tuple(op.frequency for op in bath_ops)
        pairs = [spectral_pair(w, temperature, gamma) for w in frequencies]
        spectra[bath] = BathSpectrum(
            bath=bath,
            temperature=temperature,
            gamma=gamma,
            frequencies=frequencies,
            occupations=tuple(mean_occupation(w, temperature) for w in frequencies),
            j_plus=tuple(pair[0] for pair in pairs),
            j_minus=tuple(pair[1] for pair in pairs),
        )
    return spectra


@dataclass(frozen=True, eq=False)
class GeneratorContext:
    """Everything the generator needs; immutable and shareable across threads"""

    params: ModelParams
    eigensystem: EigenSystem
    operators: List[EigenOperator]
    spectra: Dict[Bath, BathSpectrum]
    _superoperator: Dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def max_rate(self) -> float:
        return max(max(s.j_minus) for s in self.spectra.values())

    def superoperator(self) -> np.ndarray:
        """Cached 64x64 generator matrix (computed once per context)"""
        if "full" not in self._superoperator:
            self._superoperator["full"] = liouvillian_superoperator(self)
        return self._superoperator["full"]


def build_generator_context(p: ModelParams, validate: bool = True) -> GeneratorContext:
    """Hamiltonian, eigensystem, eigenoperators and spectra for one parameter point"""
    if validate:
        validate_params(p)
    es = eigensystem(build_hamiltonian(p), p)
    ops = build_eigenoperators(es, p)
    return GeneratorContext(params=p, eigensystem=es, operators=ops, spectra=build_spectra(ops, p))


def apply_dissipator(
    bath: Bath,
    rho: Union[DensityMatrix, np.ndarray],
    ops: Sequence[EigenOperator],
    spectra: Dict[Bath, BathSpectrum],
) -> np.ndarray:
    """
    Apply L_mu to a Hermitian matrix

    Returns:
        Traceless Hermitian 8x8 matrix
    """
    m = _as_array(rho)
    if m.shape != (DIMENSION, DIMENSION):
        raise ValueError(f"Expected an 8x8 matrix, got shape {m.shape}")

    spectrum = spectra[Bath(bath)]
    result = np.zeros((DIMENSION, DIMENSION), dtype=complex)
    for op in operators_for(ops, bath):
        j_plus, j_minus = spectrum.pair(op.j)
        v, vd = op.matrix, op.dagger
        vdv, vvd = vd @ v, v @ vd
        result += j_minus * (2.0 * v @ m @ vd - vdv @ m - m @ vdv)
        result += j_plus * (2.0 * vd @ m @ v - vvd @ m - m @ vvd)
    return result


def apply_generator(rho: Union[DensityMatrix, np.ndarray], context: GeneratorContext) -> np.ndarray:
    """Full right-hand side: -i[H_S, rho] + L_H + L_R + L_C"""
    m = _as_array(rho)
    h = context.eigensystem.hamiltonian
    result = -1j * (h @ m - m @ h)
    for bath in Bath:
        result += apply_dissipator(bath, m, context.operators, context.spectra)
    return result


def liouvillian_superoperator(context: GeneratorContext) -> np.ndarray:
    """
    Generator as a 64x64 matrix acting on row-major vec(rho)

    Built column by column from apply_generator on the matrix units, so it is
    the same map by construction.
    """
    size = DIMENSION * DIMENSION
    superop = np.zeros((size, size), dtype=complex)
    unit = np.zeros((DIMENSION, DIMENSION), dtype=complex)
    for k in range(DIMENSION):
        for l in range(DIMENSION):  # noqa: E741
            unit[k, l] = 1.0
            superop[:, k * DIMENSION + l] = apply_generator(unit, context).reshape(-1)
            unit[k, l] = 0.0
    return superop


def relaxation_gap(context: GeneratorContext) -> float:
    """Smallest nonzero decay rate of the generator (slowest relaxation mode)"""
    rates = -np.real(linalg.eigvals(context.superoperator()))
    rates = np.sort(rates)
    return float(rates[1])


def default_time_step(context: GeneratorContext) -> float:
    """0.01 / max(gamma_mu (n_max + 1), omega_R)"""
    return 0.01 / max(context.max_rate, context.params.omega_R)


@dataclass(frozen=True, eq=False)
class EvolutionResult:
    """Outcome of a time integration"""

    final: DensityMatrix
    times: np.ndarray
    trajectory: Optional[np.ndarray]
    trace_drift: float
    generator_norm: float


def evolve(
    rho0: Union[DensityMatrix, np.ndarray],
    context: GeneratorContext,
    steps: int,
    dt: Optional[float] = None,
    record_every: Optional[int] = None,
) -> EvolutionResult:
    """
    Integrate the master equation with classic fourth-order Runge-Kutta

    Args:
        rho0: Initial state (eigenbasis)
        context: Generator context
        steps: Number of RK4 steps (0 returns rho0 unchanged)
        dt: Step size; defaults to default_time_step(context)
        record_every: Keep every n-th state in the returned trajectory

    Returns:
        EvolutionResult with the trace-renormalized final state and
        ||apply_generator(rho_final)||

    Raises:
        StepSizeUnstable: dt outside the RK4 stability region, or trace drift above 1e-6
    """
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    m0 = _as_array(rho0).copy()
    step = default_time_step(context) if dt is None else float(dt)
    if steps == 0:
        return EvolutionResult(
            final=DensityMatrix(m0),
            times=np.array([0.0]),
            trajectory=np.stack([m0]) if record_every else None,
            trace_drift=0.0,
            generator_norm=float(np.linalg.norm(apply_generator(m0, context))),
        )
    superop = context.superoperator()

    spectral_radius = float(np.max(np.abs(linalg.eigvals(superop))))
    if step * spectral_radius > RK4_STABILITY:
        raise StepSizeUnstable(
            f"dt={step:.3e} times spectral radius {spectral_radius:.3e} exceeds {RK4_STABILITY}"
        )

    vec = m0.reshape(-1)
    recorded: List[np.ndarray] = [m0.copy()] if record_every else []
    half = 0.5 * step
    for n in range(1, steps + 1):
        k1 = superop @ vec
        k2 = superop @ (vec + half * k1)
        k3 = superop @ (vec + half * k2)
        k4 = superop @ (vec + step * k3)
        vec = vec + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if record_every and n % record_every == 0:
            recorded.append(vec.reshape(DIMENSION, DIMENSION).copy())

    final = vec.reshape(DIMENSION, DIMENSION)
    if not np.all(np.isfinite(final)):
        raise StepSizeUnstable(f"Integration diverged with dt={step:.3e}")

    trace = np.trace(final)
    drift = float(abs(trace - np.trace(m0)))
    if drift > TRACE_DRIFT_LIMIT:
        raise StepSizeUnstable(f"Trace drifted by {drift:.3e} with dt={step:.3e}")
    final = final / trace

    generator_norm = float(np.linalg.norm(apply_generator(final, context)))
    logger.debug(
        f"Evolved {steps} steps of dt={step:.3e}: drift={drift:.2e}, |L rho|={generator_norm:.2e}"
    )

    if record_every:
        times = step * record_every * np.arange(len(recorded))
        trajectory: Optional[np.ndarray] = np.stack(recorded)
    else:
        times = np.array([step * steps])
        trajectory = None
    return EvolutionResult(
        final=DensityMatrix(final),
        times=times,
        trajectory=trajectory,
        trace_drift=drift,
        generator_norm=generator_norm,
    )
