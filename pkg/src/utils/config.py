"""
UCERT - Uniform-measurement Certification
Configuration Manager
"""

import copy
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

REPO_ROOT = Path(__file__).resolve().parents[2]
DEFAULT_CONFIG_PATH = REPO_ROOT / "config" / "config.yaml"
THREADS_ENV_VAR = "UCERT_NUM_THREADS"


class Config:
    """Manages application configuration."""

    def __init__(self, config_path: Union[str, Path, None] = None, data: Optional[Dict[str, Any]] = None):
        self.config_path = Path(config_path) if config_path else DEFAULT_CONFIG_PATH
        self._config = copy.deepcopy(data) if data is not None else self._load_config()
        self._setup_directories()
        self._resolve_workers()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file."""
        if not self.config_path.exists():
            raise FileNotFoundError(
                f"Config file not found: {self.config_path}\n"
                f"Please create config/config.yaml"
            )

        with open(self.config_path, 'r') as f:
            return yaml.safe_load(f) or {}

    def _setup_directories(self):
        """Create output and log directories."""
        dirs = [Path(self.get('output.results_dir', './results'))]
        for file_key in ('output.ledger_path', 'logging.file'):
            file_path = self.get(file_key)
            if file_path:
                dirs.append(Path(file_path).parent)

        for d in dirs:
            d.mkdir(parents=True, exist_ok=True)

    def _resolve_workers(self):
        """Worker count: environment override first, then the config file."""
        env_value = os.environ.get(THREADS_ENV_VAR)
        if env_value:
            try:
                self.num_workers = max(1, int(env_value))
            except ValueError:
                raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {env_value!r}")
        else:
            self.num_workers = max(1, int(self.get('performance.num_workers', 1)))

        self._config.setdefault('performance', {})['num_workers'] = self.num_workers

    def get(self, key_path: str, default=None):
        """
        Get config value using dot notation.
        Example: config.get('certification.default_seed')
        """
        keys = key_path.split('.')
        value = self._config

        try:
            for key in keys:
                value = value[key]
            return value
        except (KeyError, TypeError):
            return default

    def section(self, name: str) -> Dict[str, Any]:
        """Copy of a whole top-level section."""
        return dict(self._config.get(name) or {})

    def snapshot(self) -> Dict[str, Any]:
        """Deep copy of the full configuration (recorded in run manifests)."""
        return copy.deepcopy(self._config)

    @classmethod
    def from_snapshot(cls, snapshot: Dict[str, Any], source: Union[str, Path]) -> "Config":
        """Rebuild the configuration a manifest recorded; per-run "resolved" settings are dropped."""
        data = {k: v for k, v in snapshot.items() if k != "resolved"}
        return cls(source, data=data)

    @property
    def statevector_max_qubits(self) -> int:
        return int(self.get('simulation.statevector_max_qubits', 24))

    @property
    def dense_dynamics_max_sites(self) -> int:
        return int(self.get('simulation.dense_dynamics_max_sites', 14))

    @property
    def default_seed(self) -> int:
        return int(self.get('certification.default_seed', 0))

    @property
    def results_dir(self) -> Path:
        return Path(self.get('output.results_dir', './results'))

    @property
    def ledger_path(self) -> Optional[str]:
        return self.get('output.ledger_path')

    def __repr__(self) -> str:
        return f"Config(path={self.config_path}, workers={self.num_workers})"


# Global config instance
_config = None


def get_config(config_path: Union[str, Path, None] = None) -> Config:
    """Get global config instance (reloaded when an explicit path is given)."""
    global _config
    if _config is None or config_path is not None:
        _config = Config(config_path)
    return _config
