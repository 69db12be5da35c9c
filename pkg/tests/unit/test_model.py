"""
Tests for parameters, the Hamiltonian and its eigensystem
"""
import numpy as np
import pytest
from pydantic import ValidationError

from src.refrigerator.model import (
    SIGMA_Z,
    Bath,
    EigenSystem,
    analytic_spectrum,
    build_hamiltonian,
    eigensystem,
    embed,
    gibbs_populations,
    validate_params,
)
from src.shared.exceptions import (
    DegenerateBohrFrequency,
    EigenvalueMismatch,
    InvalidParameters,
    NonPositiveParameter,
)
from tests.conftest import make_params


class TestModelParams:
    def test_omega_r_is_derived(self, weak_params):
        """omega_R is always omega_H + omega_C"""
        assert weak_params.omega_R == pytest.approx(4.0)

    def test_params_are_immutable(self, weak_params):
        with pytest.raises(ValidationError):
            weak_params.g = 0.5

    def test_unknown_fields_rejected(self):
        with pytest.raises(ValidationError):
            make_params(omega_R=4.0)

    def test_per_bath_accessors(self, weak_params):
        assert weak_params.frequency(Bath.R) == pytest.approx(4.0)
        assert weak_params.temperature(Bath.C) == 18.0
        assert weak_params.gamma("H") == pytest.approx(0.003)

    def test_with_updates_returns_new_instance(self, weak_params):
        hotter = weak_params.with_updates(T_H=50.0)
        assert hotter.T_H == 50.0
        assert weak_params.T_H == 30.0

    def test_temperature_ordering_warnings(self):
        assert make_params().warnings() == []
        assert len(make_params(T_H=20.0).warnings()) == 1
        assert len(make_params(T_H=15.0, T_R=16.0, T_C=17.0).warnings()) == 2


class TestValidateParams:
    def test_valid_params_pass_unchanged(self, weak_params):
        assert validate_params(weak_params) is weak_params

    @pytest.mark.parametrize("name", ["omega_H", "omega_C", "g", "T_H", "T_R", "T_C", "gamma_C"])
    def test_non_positive_rejected(self, name):
        with pytest.raises(NonPositiveParameter) as excinfo:
            validate_params(make_params(**{name: 0.0}))
        assert excinfo.value.name == name
        assert isinstance(excinfo.value, InvalidParameters)

    def test_negative_temperature_rejected(self):
        with pytest.raises(NonPositiveParameter):
            validate_params(make_params(T_C=-1.0))

    @pytest.mark.parametrize("g,name", [(1.0, "omega_C"), (3.0, "omega_H"), (4.0, "omega_R")])
    def test_degenerate_coupling_rejected(self, g, name):
        with pytest.raises(DegenerateBohrFrequency) as excinfo:
            validate_params(make_params(g=g))
        assert excinfo.value.frequency_name == name

    def test_inverted_temperatures_only_warn(self, caplog):
        p = make_params(T_H=20.0)
        with caplog.at_level("WARNING"):
            assert validate_params(p) is p
        assert "T_H=20.0 is not above T_R=21.0" in caplog.text


class TestHamiltonian:
    def test_hermitian(self, strong_params):
        h_s = build_hamiltonian(strong_params)
        assert h_s.shape == (8, 8)
        assert np.array_equal(h_s, h_s.conj().T)

    def test_free_part_is_diagonal_without_coupling(self):
        h_s = build_hamiltonian(make_params(g=0.0))
        assert np.count_nonzero(h_s - np.diag(np.diag(h_s))) == 0
        # |e e e> sits at index 0 with energy (omega_H + omega_R + omega_C)/2
        assert h_s[0, 0].real == pytest.approx(4.0)

    def test_exchange_couples_only_the_resonant_pair(self, strong_params):
        h_s = build_hamiltonian(strong_params)
        off = h_s - np.diag(np.diag(h_s))
        rows, cols = np.nonzero(off)
        assert sorted(zip(rows.tolist(), cols.tolist())) == [(2, 5), (5, 2)]
        assert off[2, 5].real == pytest.approx(0.9)

    def test_embed_places_operator_on_slot(self):
        z_c = embed(SIGMA_Z, Bath.C)
        assert np.allclose(np.diag(z_c).real, [1, -1, 1, -1, 1, -1, 1, -1])


class TestEigensystem:
    def test_spectrum_order(self, strong_params):
        expected = [4.0, 3.0, 0.9, -1.0, 1.0, -0.9, -3.0, -4.0]
        assert np.allclose(analytic_spectrum(strong_params), expected)

    def test_spectrum_matches_numerical_diagonalization(self, strong_params):
        es = eigensystem(build_hamiltonian(strong_params), strong_params)
        numeric = np.sort(np.linalg.eigvalsh(build_hamiltonian(strong_params)))
        assert np.allclose(np.sort(es.eigenvalues), numeric, atol=1e-12)

    def test_eigenvectors_are_orthonormal_and_diagonalize(self, strong_params):
        h_s = build_hamiltonian(strong_params)
        es = eigensystem(h_s, strong_params)
        u = es.eigenvectors
        assert np.allclose(u.conj().T @ u, np.eye(8), atol=1e-14)
        assert np.allclose(es.to_eigenbasis(h_s), np.diag(es.eigenvalues), atol=1e-12)

    def test_basis_round_trip(self, strong_params, rng):
        es = eigensystem(build_hamiltonian(strong_params), strong_params)
        operator = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        assert np.allclose(es.to_eigenbasis(es.to_product_basis(operator)), operator)

    def test_scale_is_omega_h(self, strong_params):
        es = eigensystem(build_hamiltonian(strong_params), strong_params)
        assert es.scale == pytest.approx(3.0)

    def test_mismatched_hamiltonian_rejected(self, strong_params, weak_params):
        with pytest.raises(EigenvalueMismatch):
            eigensystem(build_hamiltonian(strong_params), weak_params)

    def test_eigensystem_is_read_only(self, weak_params):
        es = eigensystem(build_hamiltonian(weak_params), weak_params)
        assert isinstance(es, EigenSystem)
        with pytest.raises(ValueError):
            es.eigenvalues[0] = 0.0

    def test_gibbs_populations(self, weak_params):
        es = eigensystem(build_hamiltonian(weak_params), weak_params)
        populations = gibbs_populations(es, 20.0)
        assert populations.sum() == pytest.approx(1.0)
        ratio = populations[0] / populations[7]
        assert ratio == pytest.approx(np.exp(-8.0 / 20.0))
