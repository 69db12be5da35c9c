"""
Batch regeneration script: one failing figure must not stop the others
"""
import logging

import pytest
from pandera.errors import SchemaError

from scripts.figures import generate_all_figures
from src.sweeps.spec import get_preset


@pytest.fixture(autouse=True)
def reset_root_handlers():
    yield
    logging.getLogger().handlers.clear()


@pytest.fixture
def small_presets(mocker):
    presets = {
        figure_id: get_preset(figure_id).model_copy(update={"steps": 3})
        for figure_id in ("fig1", "fig2")
    }
    mocker.patch.object(generate_all_figures, "FIGURE_PRESETS", presets)
    return presets


def test_schema_failure_is_reported_per_figure(small_presets, mocker, capsys):
    mocker.patch.object(
        generate_all_figures,
        "emit",
        side_effect=[SchemaError(None, None, "first law violated"), b""],
    )
    assert generate_all_figures.main() == 1

    out = capsys.readouterr().out
    assert "✗ fig1 failed: first law violated" in out
    assert "✓ 3 rows written" in out
    assert "Successful: 1" in out
    assert "Failed: 1" in out


def test_all_figures_succeed(small_presets, mocker, capsys):
    mocker.patch.object(generate_all_figures, "emit", return_value=b"")
    assert generate_all_figures.main() == 0
    assert "Failed: 0" in capsys.readouterr().out
