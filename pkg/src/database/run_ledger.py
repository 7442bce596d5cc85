"""
UCERT - Run Ledger
Run manifests written next to each output and indexed in SQLite.
"""

import json
import sqlite3
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..utils.errors import RecordFormatError
from ..utils.io import atomic_write_json, file_digest
from ..utils.logger import get_logger

logger = get_logger(__name__)

MANIFEST_SUFFIX = ".manifest.json"


@dataclass
class RunManifest:
    """
    Everything needed to reproduce one command run.

    ``argv`` is the full argument list the command was resolved from, so
    ``ucert_app.py replay <manifest>`` re-runs it exactly. ``outputs`` maps each
    artifact path to its sha256 digest.
    """
    command: str
    argv: List[str]
    config: Dict[str, Any]
    seed: Optional[int]
    version: str
    started_at: str = field(default_factory=lambda: datetime.now().isoformat())
    duration_seconds: float = 0.0
    outputs: Dict[str, str] = field(default_factory=dict)
    exit_code: Optional[int] = None

    def record_output(self, path: Union[str, Path]):
        self.outputs[str(path)] = file_digest(path)

    def finish(self, start_time: float, exit_code: int):
        self.duration_seconds = round(time.perf_counter() - start_time, 6)
        self.exit_code = exit_code

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def write(self, artifact_path: Union[str, Path]) -> Path:
        """Write ``<artifact>.manifest.json`` next to the artifact."""
        path = manifest_path_for(artifact_path)
        atomic_write_json(path, self.to_dict())
        logger.debug(f"Manifest written to {path}")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunManifest":
        try:
            payload = json.loads(Path(path).read_text())
            return cls(**payload)
        except (OSError, ValueError, TypeError) as e:
            raise RecordFormatError(f"Cannot read manifest {path}: {e}") from None


def manifest_path_for(artifact_path: Union[str, Path]) -> Path:
    artifact_path = Path(artifact_path)
    return artifact_path.with_name(artifact_path.name + MANIFEST_SUFFIX)


class RunLedger:
    """
    SQLite index of every run manifest.

    One row per run: command, seed, version, timing, exit code, and the config
    and outputs as JSON text.
    """

    def __init__(self, db_path: str = "results/ledger.db"):
        """
        Open (and create if needed) the ledger.

        Args:
            db_path: Path to the SQLite database file
        """
        self.db_path = Path(db_path)
        self.db_path.parent.mkdir(parents=True, exist_ok=True)

        # check_same_thread=False allows usage across threads
        self.conn = sqlite3.connect(str(self.db_path), check_same_thread=False)
        self.conn.row_factory = sqlite3.Row

        self._create_tables()
        logger.debug(f"Run ledger opened: {db_path}")

    def _create_tables(self):
        cursor = self.conn.cursor()
        cursor.execute("""
            CREATE TABLE IF NOT EXISTS runs (
                run_id INTEGER PRIMARY KEY AUTOINCREMENT,
                command TEXT NOT NULL,
                seed INTEGER,
                version TEXT NOT NULL,
                started_at TEXT NOT NULL,
                duration_seconds REAL,
                exit_code INTEGER,
                argv TEXT NOT NULL,
                config TEXT NOT NULL,
                outputs TEXT NOT NULL
            )
        """)
        cursor.execute("CREATE INDEX IF NOT EXISTS idx_command ON runs(command)")
        self.conn.commit()

    def add(self, manifest: RunManifest) -> int:
        """
        Append one manifest.

        Returns:
            The new run id
        """
        cursor = self.conn.cursor()
        cursor.execute("""
            INSERT INTO runs (
                command, seed, version, started_at, duration_seconds,
                exit_code, argv, config, outputs
            ) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)
        """, (
            manifest.command,
            manifest.seed,
            manifest.version,
            manifest.started_at,
            manifest.duration_seconds,
            manifest.exit_code,
            json.dumps(manifest.argv),
            json.dumps(manifest.config, sort_keys=True, default=str),
            json.dumps(manifest.outputs, sort_keys=True),
        ))
        self.conn.commit()
        return int(cursor.lastrowid)

    @staticmethod
    def _row_to_dict(row: sqlite3.Row) -> Dict[str, Any]:
        entry = dict(row)
        for key in ("argv", "config", "outputs"):
            entry[key] = json.loads(entry[key])
        return entry

    def get(self, run_id: int) -> Optional[Dict[str, Any]]:
        cursor = self.conn.cursor()
        cursor.execute("SELECT * FROM runs WHERE run_id = ?", (run_id,))
        row = cursor.fetchone()
        return self._row_to_dict(row) if row else None

    def get_all(self, command: Optional[str] = None) -> List[Dict[str, Any]]:
        """All runs in insertion order, optionally for one command."""
        cursor = self.conn.cursor()
        if command is None:
            cursor.execute("SELECT * FROM runs ORDER BY run_id")
        else:
            cursor.execute("SELECT * FROM runs WHERE command = ? ORDER BY run_id", (command,))
        return [self._row_to_dict(row) for row in cursor.fetchall()]

    def count(self) -> int:
        cursor = self.conn.cursor()
        cursor.execute("SELECT COUNT(*) FROM runs")
        return cursor.fetchone()[0]

    def close(self):
        self.conn.close()

    def __len__(self) -> int:
        return self.count()

    def __repr__(self) -> str:
        return f"RunLedger(runs={self.count()}, db={self.db_path.name})"
