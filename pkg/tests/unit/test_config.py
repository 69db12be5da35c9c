"""
Tests for JSON configuration, settings and logging setup
"""
import json
import logging

import pytest

from src.refrigerator.config import RefrigeratorConfig, load_config, parse_config
from src.shared.exceptions import ConfigError
from src.shared.logging import get_logger, setup_logging
from src.shared.settings import Settings, get_settings

DOCUMENT = {"omega_H": 3, "omega_C": 1, "g": 0.003, "T_H": 30, "T_R": 21, "T_C": 18}


class TestParseConfig:
    def test_gamma_defaults_to_fraction_of_omega_h(self):
        params = parse_config(json.dumps(DOCUMENT)).to_params()
        assert params.gamma_H == pytest.approx(0.003)
        assert params.gamma_R == params.gamma_C == params.gamma_H

    def test_shared_gamma(self):
        params = parse_config({**DOCUMENT, "gamma": 0.01}).to_params()
        assert (params.gamma_H, params.gamma_R, params.gamma_C) == (0.01, 0.01, 0.01)

    def test_per_bath_override_wins(self):
        params = parse_config({**DOCUMENT, "gamma": 0.01, "gamma_C": 0.002}).to_params()
        assert params.gamma_C == 0.002
        assert params.gamma_H == 0.01

    def test_accepts_bytes(self):
        config = parse_config(json.dumps(DOCUMENT).encode())
        assert isinstance(config, RefrigeratorConfig)

    def test_malformed_json(self):
        with pytest.raises(ConfigError):
            parse_config("{not json")

    def test_non_object(self):
        with pytest.raises(ConfigError):
            parse_config("[1, 2, 3]")

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            parse_config({**DOCUMENT, "omega_X": 1.0})

    def test_missing_key(self):
        document = dict(DOCUMENT)
        del document["T_C"]
        with pytest.raises(ConfigError):
            parse_config(document)

    def test_config_error_exit_code(self):
        assert ConfigError.exit_code == 1


class TestLoadConfig:
    def test_round_trip_from_file(self, tmp_path):
        path = tmp_path / "point.json"
        path.write_text(json.dumps(DOCUMENT))
        assert load_config(path).to_params().T_H == 30.0

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.json")


class TestSettings:
    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("FRIDGE_MAX_WORKERS", raising=False)
        settings = Settings(_env_file=None)
        assert settings.max_workers == 4
        assert settings.default_steps == 200
        assert settings.log_format == "text"

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("FRIDGE_MAX_WORKERS", "2")
        monkeypatch.setenv("FRIDGE_LOG_FORMAT", "json")
        settings = get_settings()
        assert settings.max_workers == 2
        assert settings.log_format == "json"

    def test_cached(self):
        assert get_settings() is get_settings()


class TestLogging:
    @pytest.fixture(autouse=True)
    def reset_root_handlers(self):
        yield
        for handler in logging.getLogger().handlers:
            handler.close()
        logging.getLogger().handlers.clear()

    def test_file_handler(self, tmp_path):
        log_file = tmp_path / "logs" / "fridge.log"
        setup_logging(log_level="DEBUG", log_file=str(log_file))
        get_logger("tests.logging").info("hello fridge")
        for handler in logging.getLogger().handlers:
            handler.flush()
        assert "hello fridge" in log_file.read_text()

    def test_json_records(self, tmp_path):
        log_file = tmp_path / "fridge.jsonl"
        setup_logging(log_level="INFO", log_file=str(log_file), json_logs=True)
        get_logger("tests.logging").warning("structured")
        for handler in logging.getLogger().handlers:
            handler.flush()
        record = json.loads(log_file.read_text().strip().splitlines()[-1])
        assert record["message"] == "structured"
        assert record["levelname"] == "WARNING"
