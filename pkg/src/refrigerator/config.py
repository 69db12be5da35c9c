"""
JSON experiment configuration

Document shape:
    {"omega_H": 3, "omega_C": 1, "g": 0.003, "T_H": 30, "T_R": 21, "T_C": 18,
     "gamma": 0.003, "gamma_C": 0.002}
gamma defaults to 0.001 * omega_H; gamma_H / gamma_R / gamma_C override it per bath.
"""
from pathlib import Path
from typing import Any, Dict, Optional, Union

import orjson
from pydantic import BaseModel, ConfigDict, ValidationError

from src.refrigerator.model import ModelParams
from src.shared.exceptions import ConfigError
from src.shared.logging import get_logger

logger = get_logger(__name__)

DEFAULT_GAMMA_FRACTION = 0.001


class RefrigeratorConfig(BaseModel):
    """Experiment description as written by users"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    omega_H: float
    omega_C: float
    g: float
    T_H: float
    T_R: float
    T_C: float
    gamma: Optional[float] = None
    gamma_H: Optional[float] = None
    gamma_R: Optional[float] = None
    gamma_C: Optional[float] = None

    def resolved_gamma(self, override: Optional[float]) -> float:
        if override is not None:
            return override
        if self.gamma is not None:
            return self.gamma
        return DEFAULT_GAMMA_FRACTION * self.omega_H

    def to_params(self) -> ModelParams:
        return ModelParams(
            omega_H=self.omega_H,
            omega_C=self.omega_C,
            g=self.g,
            T_H=self.T_H,
            T_R=self.T_R,
            T_C=self.T_C,
            gamma_H=self.resolved_gamma(self.gamma_H),
            gamma_R=self.resolved_gamma(self.gamma_R),
            gamma_C=self.resolved_gamma(self.gamma_C),
        )


def parse_config(document: Union[bytes, str, Dict[str, Any]]) -> RefrigeratorConfig:
    """
    Parse a configuration document

    Raises:
        ConfigError: Malformed JSON or schema violation
    """
    try:
        data = orjson.loads(document) if isinstance(document, (bytes, str)) else document
    except orjson.JSONDecodeError as e:
        raise ConfigError(f"Configuration is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError("Configuration must be a JSON object")
    try:
        return RefrigeratorConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {e}") from e


def load_config(path: Union[str, Path]) -> RefrigeratorConfig:
    """Read and parse a configuration file"""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ConfigError(f"Cannot read configuration {path}: {e}") from e
    config = parse_config(raw)
    logger.info(f"Loaded configuration from {path}")
    return config
