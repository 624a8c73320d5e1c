# tests/conftest.py
import logging
import os
import sys
from pathlib import Path

import hypothesis
import numpy as np
import pytest

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from common.config import reload_config

hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch, tmp_path):
    """No log file, no history database unless a test sets one"""
    monkeypatch.setenv("LOG_FILE", "")
    monkeypatch.delenv("QASKEY_HISTORY_DB", raising=False)
    monkeypatch.delenv("QASKEY_MAX_TERMS", raising=False)
    monkeypatch.delenv("QASKEY_OUTPUT", raising=False)
    yield reload_config()
    logging.getLogger("qaskey").handlers.clear()
    reload_config()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
