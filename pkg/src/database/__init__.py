# src/database/__init__.py
from .record_store import RecordStore
from .run_ledger import RunLedger, RunManifest

__all__ = ['RecordStore', 'RunLedger', 'RunManifest']
