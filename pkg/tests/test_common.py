# tests/test_common.py
import json
import logging

import pytest

from common.config import QaskeyConfig, get_config, reload_config
from common.errors import ConfigError, PoleError, QaskeyError
from common.logger import get_module_logger, log_operation, setup_logging


class TestConfig:
    def test_defaults(self):
        config = get_config()
        assert config.numerics.max_terms == 10000
        assert config.report.digits == 17
        assert config.report.history_db == ""
        assert config.system.log_file == ""

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("QASKEY_QUAD_STEP", "0.125")
        monkeypatch.setenv("QASKEY_COMPENSATED", "true")
        config = reload_config()
        assert config.quadrature.initial_step == 0.125
        assert config.numerics.compensated is True

    def test_invalid_environment(self, monkeypatch):
        monkeypatch.setenv("QASKEY_MAX_TERMS", "3")
        monkeypatch.setenv("QASKEY_OUTPUT", "xml")
        with pytest.raises(ConfigError) as excinfo:
            reload_config()
        assert len(excinfo.value.details["errors"]) == 2
        monkeypatch.delenv("QASKEY_MAX_TERMS")
        monkeypatch.delenv("QASKEY_OUTPUT")

    def test_malformed_number(self, monkeypatch):
        monkeypatch.setenv("QASKEY_MAX_TERMS", "many")
        with pytest.raises(ConfigError) as excinfo:
            reload_config()
        assert excinfo.value.details["variable"] == "QASKEY_MAX_TERMS"
        monkeypatch.delenv("QASKEY_MAX_TERMS")

    def test_negative_quadrature_safety(self, monkeypatch):
        monkeypatch.setenv("QASKEY_QUAD_SAFETY", "-40")
        with pytest.raises(ConfigError):
            reload_config()
        monkeypatch.delenv("QASKEY_QUAD_SAFETY")

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "conf" / "qaskey.json"
        get_config().save_to_file(str(path))
        loaded = QaskeyConfig.load_from_file(str(path))
        assert loaded == get_config()


class TestErrors:
    def test_details_in_dict(self):
        error = PoleError("denominator vanished", {"index": 2})
        assert isinstance(error, QaskeyError)
        assert isinstance(error, ValueError)
        assert error.to_dict() == {"error": "PoleError", "message": "denominator vanished", "index": 2}


class TestLogging:
    def test_file_handler_writes_json_lines(self, tmp_path):
        log_file = tmp_path / "logs" / "qaskey.log"
        setup_logging("DEBUG", str(log_file))
        get_module_logger("qcore").info("products ready")
        for handler in logging.getLogger("qaskey").handlers:
            handler.flush()

        entry = json.loads(log_file.read_text().splitlines()[-1])
        assert entry["message"] == "products ready"
        assert entry["component"] == "QCORE"
        assert entry["level"] == "INFO"

    def test_no_file_handler_without_path(self):
        logger = setup_logging("INFO", "")
        assert len(logger.handlers) == 1

    def test_log_operation_reraises(self):
        @log_operation("failing")
        def failing():
            raise PoleError("boom")

        with pytest.raises(PoleError):
            failing()
