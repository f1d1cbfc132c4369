"""
Unit tests for the logger and environment loading.
"""

import logging
import os
from unittest.mock import patch

from app.config import get_settings
from app.utils.logger import setup_logger


class TestDotenv:
    """Tests for settings read from a .env file in the working directory."""

    def test_logger_reads_level_from_dotenv(self, tmp_path, monkeypatch):
        (tmp_path / ".env").write_text("LOG_LEVEL=DEBUG\n", encoding="utf-8")
        monkeypatch.chdir(tmp_path)
        with patch.dict(os.environ):
            os.environ.pop("LOG_LEVEL", None)
            lg = setup_logger("gapbench.dotenv")
            assert os.environ["LOG_LEVEL"] == "DEBUG"
        assert lg.level == logging.DEBUG

    def test_environment_wins_over_dotenv(self, tmp_path, monkeypatch):
        (tmp_path / ".env").write_text("LOG_LEVEL=DEBUG\n", encoding="utf-8")
        monkeypatch.chdir(tmp_path)
        monkeypatch.setenv("LOG_LEVEL", "WARNING")
        lg = setup_logger("gapbench.dotenv.override")
        assert lg.level == logging.WARNING

    def test_settings_read_dotenv(self, tmp_path, monkeypatch):
        (tmp_path / ".env").write_text("GAPBENCH_WORKERS=3\n", encoding="utf-8")
        monkeypatch.chdir(tmp_path)
        with patch.dict(os.environ):
            os.environ.pop("GAPBENCH_WORKERS", None)
            assert get_settings().workers == 3
