"""
Exception hierarchy for the refrigerator simulator

Three families map onto CLI exit codes:
- InvalidParameters  -> 1
- NumericalFailure   -> 2
- EmissionError      -> 3
"""
from pathlib import Path
from typing import Optional, Union


class RefrigeratorError(Exception):
    """Base class for all simulator errors"""

    exit_code: int = 2


class InvalidParameters(RefrigeratorError):
    """Parameters or configuration violate a hard model constraint"""

    exit_code = 1


class NonPositiveParameter(InvalidParameters):
    """A frequency, coupling, temperature or decay rate is not strictly positive"""

    def __init__(self, name: str, value: float):
        self.name = name
        self.value = value
        super().__init__(f"Parameter '{name}' must be > 0, got {value!r}")


class DegenerateBohrFrequency(InvalidParameters):
    """Coupling g coincides with a bare frequency, producing a zero Bohr frequency"""

    def __init__(self, g: float, frequency_name: str, frequency: float):
        self.g = g
        self.frequency_name = frequency_name
        self.frequency = frequency
        super().__init__(
            f"g={g!r} equals {frequency_name}={frequency!r}: a Bohr frequency vanishes"
        )


class ConfigError(InvalidParameters):
    """Configuration document could not be parsed or validated"""


class NumericalFailure(RefrigeratorError):
    """An internal consistency check or numerical solve failed"""

    exit_code = 2


class EigenvalueMismatch(NumericalFailure):
    """Analytic eigensystem disagrees with numerical diagonalization"""


class ZeroFrequency(NumericalFailure):
    """An eigenoperator ended up with a vanishing Bohr frequency"""


class CommutatorViolation(NumericalFailure):
    """An eigenoperator does not satisfy [H_S, V] = -w V"""

    def __init__(self, bath: str, j: int, residual: float):
        self.bath = bath
        self.j = j
        self.residual = residual
        super().__init__(
            f"Eigenoperator V_{bath}{j} violates [H_S, V] = -wV (residual={residual:.3e})"
        )


class DomainError(NumericalFailure, ValueError):
    """Scalar function evaluated outside its domain"""


class InvalidDensityMatrix(NumericalFailure):
    """Matrix is not Hermitian, unit-trace and positive semidefinite"""


class StepSizeUnstable(NumericalFailure):
    """Time integration drifted or diverged for the requested step size"""


class DegenerateKernel(NumericalFailure):
    """Rate matrix kernel is not one-dimensional"""

    def __init__(self, dimension: int):
        self.dimension = dimension
        super().__init__(f"Rate matrix kernel has dimension {dimension}, expected 1")


class NegativePopulation(NumericalFailure):
    """Steady-state population is negative beyond numerical slack"""


class OracleDisagreement(NumericalFailure):
    """Two independent constructions of the same object disagree"""


class FormMismatch(NumericalFailure):
    """Trace and vector forms of a heat current disagree"""


class SecondLawViolation(NumericalFailure):
    """Entropy production came out negative"""


class EmissionError(RefrigeratorError):
    """Writing an output file failed"""

    exit_code = 3

    def __init__(self, path: Union[str, Path], reason: Optional[str] = None):
        self.path = Path(path)
        message = f"Failed to write {self.path}"
        if reason:
            message = f"{message}: {reason}"
        super().__init__(message)
