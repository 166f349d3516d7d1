"""
Unit tests for shared/logging_config.py
"""

import json

import structlog

from shared.config import LoggingConfig, Settings
from shared.logging_config import configure_logging


def settings_with(**logging):
    return Settings(logging=LoggingConfig(**logging))


class TestConfigureLogging:
    """Tests for structlog configuration."""

    def test_json_lines_on_stderr(self, capsys):
        """Test that JSON records go to stderr, never stdout."""
        configure_logging(settings_with(level="INFO", format="json"))
        structlog.get_logger("test").info("catalog_built", classes=11)

        captured = capsys.readouterr()
        assert captured.out == ""
        record = json.loads(captured.err.strip().splitlines()[-1])
        assert record["event"] == "catalog_built"
        assert record["classes"] == 11
        assert record["level"] == "info"

    def test_level_filters(self, capsys):
        """Test that records below the configured level are dropped."""
        configure_logging(settings_with(level="ERROR", format="json"))
        structlog.get_logger("test").warning("check_failed")
        assert capsys.readouterr().err == ""

    def test_timestamp(self, capsys):
        configure_logging(settings_with(level="INFO", format="json", include_timestamp=True))
        structlog.get_logger("test").info("tick")
        record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert "timestamp" in record

    def test_console_renderer(self, capsys):
        configure_logging(settings_with(level="INFO", format="console"))
        structlog.get_logger("test").info("line_counts", hyperbolic=16)
        err = capsys.readouterr().err
        assert "line_counts" in err
        assert "hyperbolic=16" in err
