"""
Test configuration loading, logging setup and seed derivation
"""
import numpy as np
import pytest
import yaml
from loguru import logger

from src.utils.config import THREADS_ENV_VAR, Config, get_config
from src.utils.logger import get_logger, setup_logging
from src.utils.seeding import derive_seed, make_rng


def test_config_values(config_file):
    config = Config(config_file)
    assert config.get("certification.sampler_mode") == "auto"
    assert config.get("certification.missing", 5) == 5
    assert config.get("rydberg.h.nested") is None
    assert config.statevector_max_qubits == 24
    assert config.dense_dynamics_max_sites == 14
    assert config.num_workers == 1
    assert config.results_dir.is_dir()
    assert config.section("montecarlo")["trials"] == 200


def test_worker_override_from_environment(config_file, monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "3")
    config = Config(config_file)
    assert config.num_workers == 3
    assert config.snapshot()["performance"]["num_workers"] == 3

    monkeypatch.setenv(THREADS_ENV_VAR, "many")
    with pytest.raises(ValueError):
        Config(config_file)


def test_snapshot_is_a_deep_copy(config_file):
    config = Config(config_file)
    snapshot = config.snapshot()
    snapshot["montecarlo"]["grid"].append("9:auto:high")
    assert "9:auto:high" not in config.get("montecarlo.grid")


def test_missing_config_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        Config(tmp_path / "absent.yaml")


def test_get_config_reloads_on_explicit_path(config_file, tmp_path):
    first = get_config(config_file)
    assert get_config() is first

    payload = yaml.safe_load(config_file.read_text())
    payload["certification"]["default_seed"] = 17
    other = tmp_path / "other.yaml"
    other.write_text(yaml.safe_dump(payload))
    assert get_config(other).default_seed == 17


def test_logging_writes_to_file(tmp_path):
    log_file = tmp_path / "logs" / "ucert.log"
    setup_logging(log_file=str(log_file), level="DEBUG", console=False)
    get_logger("src.certification.algorithm").info("certification finished")
    logger.remove()
    text = log_file.read_text()
    assert "algorithm" in text
    assert "certification finished" in text


def test_seed_streams():
    a = make_rng(5, "montecarlo", 0, 1).integers(0, 1 << 30, size=4)
    b = make_rng(5, "montecarlo", 0, 1).integers(0, 1 << 30, size=4)
    c = make_rng(5, "montecarlo", 0, 2).integers(0, 1 << 30, size=4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)

    assert derive_seed(5, "certify", "noise") == derive_seed(5, "certify", "noise")
    assert derive_seed(5, "certify", "noise") != derive_seed(6, "certify", "noise")
    assert 0 <= derive_seed(5, "x") < 1 << 64
    with pytest.raises(ValueError):
        derive_seed(5, -1)


def test_config_from_snapshot(config_file, tmp_path):
    recorded = Config(config_file).snapshot()
    recorded["resolved"] = {"epsilon": 1e-3}
    recorded["certification"]["default_seed"] = 99

    config = Config.from_snapshot(recorded, source=tmp_path / "run.manifest.json")
    assert config.default_seed == 99
    assert "resolved" not in config.snapshot()
    assert config.results_dir.is_dir()

    recorded["certification"]["default_seed"] = 5
    assert config.default_seed == 99
