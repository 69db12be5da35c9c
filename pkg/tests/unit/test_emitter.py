"""
Tests for sweep-table validation and CSV / JSON emission
"""
import math

import numpy as np
import orjson
import pandas as pd
import pandera as pa
import pytest

from src.refrigerator.thermo import analyze
from src.shared.exceptions import EmissionError
from src.sweeps.emitter import emit, emit_report, format_float
from src.sweeps.runner import SweepResult, run_sweep
from src.sweeps.schemas import SweepValidator
from src.sweeps.spec import SweepSpec, get_preset


@pytest.fixture
def small_result(weak_params) -> SweepResult:
    spec = SweepSpec(base=weak_params, start=18.0, stop=40.0, steps=4)
    return run_sweep(spec, max_workers=2)


class TestFormatFloat:
    def test_shortest_round_trip(self):
        assert format_float(0.1) == "0.1"
        assert float(format_float(1 / 3)) == 1 / 3

    def test_non_finite(self):
        assert format_float(math.nan) == ""
        assert format_float(math.inf) == "inf"
        assert format_float(-math.inf) == "-inf"


class TestCsv:
    def test_fig1_header(self):
        spec = get_preset("fig1").to_spec(steps=3)
        payload = emit(run_sweep(spec, max_workers=1), "csv")
        header = payload.decode().splitlines()[0]
        assert header == "T_H[K],Qdot_H[J/s],Qdot_R[J/s],Qdot_C[J/s],eta,sigma"

    def test_one_line_per_row(self, small_result):
        lines = emit(small_result, "csv").decode().splitlines()
        assert len(lines) == 5
        assert lines[1].split(",")[0] == "18.0"

    def test_values_round_trip_exactly(self, small_result):
        lines = emit(small_result, "csv").decode().splitlines()
        qdot_c = [float(line.split(",")[3]) for line in lines[1:]]
        assert qdot_c == list(small_result.table["Qdot_C"])

    def test_multi_line_figures_lead_with_g(self):
        spec = get_preset("fig3").to_spec(steps=2)
        header = emit(run_sweep(spec, max_workers=2), "csv").decode().splitlines()[0]
        assert header == "g,T_H[K],Qdot_C[J/s]"

    def test_deterministic(self, weak_params):
        spec = SweepSpec(base=weak_params, start=18.0, stop=40.0, steps=4, g_values=(0.003, 0.9))
        first = emit(run_sweep(spec, max_workers=1), "csv")
        second = emit(run_sweep(spec, max_workers=4), "csv")
        assert first == second

    def test_empty_table_gives_header_only(self, weak_params):
        spec = SweepSpec(base=weak_params, variable="T_C", start=-2.0, stop=-1.0, steps=2)
        result = run_sweep(spec, max_workers=1)
        assert result.table.empty
        payload = emit(result, "csv").decode()
        assert payload == "T_C[K],Qdot_H[J/s],Qdot_R[J/s],Qdot_C[J/s],eta,sigma\n"

    def test_boolean_and_infinite_columns(self):
        spec = get_preset("fig6").to_spec(steps=2)
        spec = spec.model_copy(update={"outputs": ("g", "T_H", "T_v", "refrigerator")})
        lines = emit(run_sweep(spec, max_workers=2), "csv").decode().splitlines()
        assert lines[0] == "g,T_H[K],T_v[K],refrigerator"
        assert all(line.endswith(",inf,false") for line in lines[1:])


class TestJson:
    def test_array_of_row_objects(self, small_result):
        records = orjson.loads(emit(small_result, "json"))
        assert len(records) == 4
        assert list(records[0]) == [
            "T_H[K]",
            "Qdot_H[J/s]",
            "Qdot_R[J/s]",
            "Qdot_C[J/s]",
            "eta",
            "sigma",
        ]
        assert records[2]["Qdot_C[J/s]"] == small_result.table["Qdot_C"].iloc[2]

    def test_report(self, weak_params):
        document = orjson.loads(emit_report(analyze(weak_params)))
        assert document["refrigerator"] is True
        assert document["t_virtual"] == pytest.approx(22.2353, abs=1e-4)

    def test_unsupported_format(self, small_result):
        with pytest.raises(ValueError):
            emit(small_result, "xml")


class TestWriting:
    def test_writes_file_and_parents(self, small_result, tmp_path):
        path = tmp_path / "out" / "fig.csv"
        payload = emit(small_result, "csv", path)
        assert path.read_bytes() == payload

    def test_io_error_carries_path(self, small_result, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("a file, not a directory")
        with pytest.raises(EmissionError) as excinfo:
            emit(small_result, "csv", blocker / "fig.csv")
        assert excinfo.value.path == blocker / "fig.csv"
        assert excinfo.value.exit_code == 3


class TestSchema:
    def test_valid_table_passes(self, small_result):
        validated = SweepValidator().validate_table(small_result.table, small_result.spec)
        assert len(validated) == 4

    def test_first_law_violation_rejected(self, small_result):
        broken = small_result.table.copy()
        broken.loc[1, "Qdot_C"] = broken.loc[1, "Qdot_C"] + 1e-3
        with pytest.raises(pa.errors.SchemaError):
            SweepValidator().validate_table(broken, small_result.spec)

    def test_negative_entropy_production_rejected(self, small_result):
        broken = small_result.table.copy()
        broken.loc[0, "sigma"] = -1.0
        with pytest.raises(pa.errors.SchemaError):
            emit(SweepResult(spec=small_result.spec, table=broken), "csv")

    def test_extra_column_rejected(self, small_result):
        broken = small_result.table.assign(extra=np.zeros(len(small_result.table)))
        with pytest.raises(pa.errors.SchemaError):
            SweepValidator().validate_table(broken, small_result.spec)

    def test_empty_table_passes(self, small_result):
        empty = small_result.table.iloc[0:0]
        assert isinstance(SweepValidator().validate_table(empty, small_result.spec), pd.DataFrame)
