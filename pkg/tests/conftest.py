"""
Shared fixtures for the UCERT test suite
"""

import sys
from pathlib import Path

import numpy as np
import pytest
import yaml

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

from src.utils.seeding import make_rng  # noqa: E402


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(20240917, "tests")


@pytest.fixture
def config_file(tmp_path, monkeypatch) -> Path:
    """Repository config with every output redirected under ``tmp_path``."""
    monkeypatch.delenv("UCERT_NUM_THREADS", raising=False)
    with open(ROOT / "config" / "config.yaml") as f:
        payload = yaml.safe_load(f)

    payload["output"] = {
        "results_dir": str(tmp_path / "results"),
        "ledger_path": str(tmp_path / "results" / "ledger.db"),
    }
    payload["logging"] = {"level": "WARNING", "file": str(tmp_path / "logs" / "ucert.log"), "console": False}
    payload["performance"] = {"num_workers": 1}
    payload["montecarlo"]["show_progress"] = False
    payload["rydberg"]["show_progress"] = False

    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(payload))
    return path
