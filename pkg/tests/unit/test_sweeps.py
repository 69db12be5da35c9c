"""
Tests for sweep specifications, presets, the runner and zero crossings
"""
import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.refrigerator.thermo import analyze
from src.shared.exceptions import OracleDisagreement
from src.sweeps.crossings import find_zero_crossing
from src.sweeps.runner import run_sweep
from src.sweeps.spec import FIGURE_PRESETS, SweepSpec, default_range, get_preset
from tests.conftest import make_params


class TestSweepSpec:
    def test_grid(self, weak_params):
        spec = SweepSpec(base=weak_params, start=18.0, stop=40.0, steps=5)
        assert np.allclose(spec.grid, [18.0, 23.5, 29.0, 34.5, 40.0])
        assert spec.lines == [weak_params]

    def test_range_must_increase(self, weak_params):
        with pytest.raises(ValidationError):
            SweepSpec(base=weak_params, start=40.0, stop=18.0, steps=5)

    def test_needs_two_steps(self, weak_params):
        with pytest.raises(ValidationError):
            SweepSpec(base=weak_params, start=18.0, stop=40.0, steps=1)

    def test_g_cannot_be_swept_and_listed(self, weak_params):
        with pytest.raises(ValidationError):
            SweepSpec(base=weak_params, variable="g", start=0.1, stop=0.5, steps=3, g_values=(0.3,))

    def test_unknown_output_rejected(self, weak_params):
        with pytest.raises(ValidationError):
            SweepSpec(base=weak_params, start=18.0, stop=40.0, steps=3, outputs=("T_H", "power"))

    def test_default_outputs(self, weak_params):
        single = SweepSpec(base=weak_params, start=18.0, stop=40.0, steps=3)
        assert single.output_columns == ("T_H", "Qdot_H", "Qdot_R", "Qdot_C", "eta", "sigma")
        multi = SweepSpec(base=weak_params, start=18.0, stop=40.0, steps=3, g_values=(0.1, 0.2))
        assert multi.output_columns[:2] == ("g", "T_H")

    def test_default_t_h_range(self, weak_params):
        low, high = default_range(weak_params, "T_H")
        assert low == 18.0
        assert high == pytest.approx(3 * 22.2353, abs=1e-3)

    def test_default_t_h_range_without_virtual_temperature(self):
        assert default_range(make_params(T_C=10.0, T_R=40.0), "T_H") == (10.0, 100.0)


class TestPresets:
    def test_all_figures_present(self):
        assert sorted(FIGURE_PRESETS) == ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6"]

    @pytest.mark.parametrize("figure_id", sorted(FIGURE_PRESETS))
    def test_shared_constants(self, figure_id):
        base = FIGURE_PRESETS[figure_id].base
        assert (base.omega_H, base.omega_C) == (3.0, 1.0)
        assert base.gamma_H == base.gamma_R == base.gamma_C == pytest.approx(0.003)

    @pytest.mark.parametrize(
        "figure_id,fractions",
        [
            ("fig1", (0.001,)),
            ("fig2", (0.001,)),
            ("fig3", (0.001, 0.1, 0.2, 0.25, 0.3, 0.35)),
            ("fig4", (0.3,)),
            ("fig5", (0.001, 0.1, 0.15, 0.2, 0.25, 0.3)),
            ("fig6", (0.001, 0.1, 0.2, 0.3, 0.4, 0.5)),
        ],
    )
    def test_coupling_lists(self, figure_id, fractions):
        spec = get_preset(figure_id).to_spec()
        assert [p.g for p in spec.lines] == pytest.approx([f * 3.0 for f in fractions])

    def test_fig6_baths(self):
        base = get_preset("fig6").base
        assert (base.T_C, base.T_R) == (10.0, 40.0)

    def test_overrides(self):
        spec = get_preset("fig1").to_spec(steps=10, start=20.0, stop=30.0)
        assert (spec.start, spec.stop, spec.steps) == (20.0, 30.0, 10)

    def test_unknown_figure(self):
        with pytest.raises(KeyError):
            get_preset("fig7")

    def test_preset_without_g_lines(self):
        preset = get_preset("fig3").model_copy(update={"g_fractions": ()})
        with pytest.raises(ValueError):
            preset.to_spec()


class TestRunSweep:
    def test_rows_in_grid_order(self, weak_params):
        spec = SweepSpec(base=weak_params, start=20.0, stop=40.0, steps=6)
        result = run_sweep(spec, max_workers=3)
        assert list(result.table["T_H"]) == pytest.approx(list(spec.grid))
        assert result.skipped == []
        assert list(result.table.columns[:3]) == ["line", "g", "T_H"]

    def test_identical_for_any_worker_count(self, weak_params):
        spec = SweepSpec(base=weak_params, start=20.0, stop=40.0, steps=6, g_values=(0.003, 0.9))
        serial = run_sweep(spec, max_workers=1).table
        parallel = run_sweep(spec, max_workers=4).table
        assert serial.equals(parallel)
        assert list(serial["line"]) == [0] * 6 + [1] * 6

    def test_degenerate_point_skipped_with_reason(self, weak_params):
        spec = SweepSpec(base=weak_params, variable="g", start=0.5, stop=1.5, steps=3)
        result = run_sweep(spec, max_workers=2)
        assert len(result.table) == 2
        assert len(result.skipped) == 1
        skipped = result.skipped[0]
        assert skipped.value == pytest.approx(1.0)
        assert skipped.error == "DegenerateBohrFrequency"
        assert "omega_C" in skipped.reason

    def test_invalid_point_skipped(self, weak_params):
        spec = SweepSpec(base=weak_params, variable="T_C", start=-1.0, stop=10.0, steps=2)
        result = run_sweep(spec, max_workers=1)
        assert [s.error for s in result.skipped] == ["NonPositiveParameter"]

    def test_refrigerator_column(self, weak_params):
        spec = SweepSpec(base=weak_params, start=18.0, stop=40.0, steps=3)
        table = run_sweep(spec, max_workers=1).table
        assert list(table["refrigerator"]) == [False, True, True]

    def test_rows_obey_laws(self, strong_params):
        spec = SweepSpec(base=strong_params, start=18.0, stop=200.0, steps=8)
        table = run_sweep(spec, max_workers=2).table
        currents = table[["Qdot_H", "Qdot_R", "Qdot_C"]]
        assert np.all(currents.sum(axis=1).abs() <= 1e-10 * currents.abs().max(axis=1))
        assert np.all(table["sigma"] >= -1e-12)

    def test_efficiency_nan_when_undefined(self, weak_params):
        spec = SweepSpec(base=weak_params, start=20.0, stop=21.0, steps=2)
        table = run_sweep(spec, max_workers=1).table
        assert table["eta"].dtype == np.float64
        assert all(math.isfinite(v) for v in table["eta"])


class TestCrossings:
    def test_weak_coupling_root_at_virtual_temperature(self, weak_params):
        spec = SweepSpec(base=weak_params, start=18.0, stop=40.0, steps=12)
        crossings = find_zero_crossing(spec)
        assert len(crossings) == 1
        assert crossings[0].value == pytest.approx(22.235, abs=0.1)
        assert crossings[0].bracket[0] <= crossings[0].value <= crossings[0].bracket[1]

    def test_no_crossing_when_ratios_coincide(self):
        p = make_params(T_C=10.0, T_R=40.0, T_H=100.0)
        spec = SweepSpec(base=p, start=41.0, stop=200.0, steps=12)
        assert find_zero_crossing(spec) == []

    def test_unknown_observable(self, weak_params):
        spec = SweepSpec(base=weak_params, start=18.0, stop=40.0, steps=3)
        with pytest.raises(ValueError):
            find_zero_crossing(spec, observable="eta")

    def test_failed_refinement_skips_the_bracket(self, weak_params, mocker):
        spec = SweepSpec(base=weak_params, start=18.0, stop=40.0, steps=12, g_values=(0.003, 0.9))
        on_grid = set(spec.grid.tolist())

        def grid_only(p):
            if p.T_H not in on_grid:
                raise OracleDisagreement("rate matrices differ")
            return analyze(p)

        mocker.patch("src.sweeps.crossings.analyze", side_effect=grid_only)
        assert find_zero_crossing(spec) == []

    def test_failed_refinement_keeps_other_lines(self, weak_params, mocker):
        spec = SweepSpec(base=weak_params, start=18.0, stop=40.0, steps=12, g_values=(0.003, 0.9))
        on_grid = set(spec.grid.tolist())

        def weak_line_fails_off_grid(p):
            if p.g == 0.003 and p.T_H not in on_grid:
                raise OracleDisagreement("rate matrices differ")
            return analyze(p)

        mocker.patch("src.sweeps.crossings.analyze", side_effect=weak_line_fails_off_grid)
        crossings = find_zero_crossing(spec)
        assert crossings
        assert {c.g for c in crossings} == {0.9}
