"""
Shared fixtures
"""
import numpy as np
import pytest

from src.refrigerator.liouvillian import build_generator_context
from src.refrigerator.model import ModelParams
from src.shared.settings import get_settings

OMEGA_H = 3.0
GAMMA = 0.001 * OMEGA_H


def make_params(**changes: float) -> ModelParams:
    """Reference parameters (omega_H=3, omega_C=1, T_R=21, T_C=18, g=gamma=0.001 omega_H)"""
    values = dict(
        omega_H=OMEGA_H,
        omega_C=1.0,
        g=0.001 * OMEGA_H,
        T_H=30.0,
        T_R=21.0,
        T_C=18.0,
        gamma_H=GAMMA,
        gamma_R=GAMMA,
        gamma_C=GAMMA,
    )
    values.update(changes)
    return ModelParams(**values)


@pytest.fixture
def weak_params() -> ModelParams:
    return make_params()


@pytest.fixture
def strong_params() -> ModelParams:
    return make_params(g=0.3 * OMEGA_H)


@pytest.fixture
def inverted_params() -> ModelParams:
    """g above omega_C, so the first cold-bath Bohr frequency is negative"""
    return make_params(g=1.5, T_C=10.0, T_R=40.0, T_H=100.0)


@pytest.fixture
def weak_context(weak_params):
    return build_generator_context(weak_params)


@pytest.fixture
def strong_context(strong_params):
    return build_generator_context(strong_params)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def clear_settings_cache():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
