"""
UCERT - Uniform-measurement Certification
Main package initialization
"""

__version__ = "1.0.0"
__author__ = "UCERT Project"

# Make common imports easier
from .operators.pauli import MeasurementDirection, PauliString
from .states.graphs import GraphSpec
from .states.stabilizer import StabilizerTableau
from .states.statevector import EnsembleSampler, MeasurementRecord, StateVector
from .certification.algorithm import CertificationConfig, CertificationReport, certify
from .database.record_store import RecordStore
from .database.run_ledger import RunLedger, RunManifest
from .utils.config import get_config
from .utils.logger import setup_logging, get_logger

__all__ = [
    'MeasurementDirection',
    'PauliString',
    'GraphSpec',
    'StabilizerTableau',
    'EnsembleSampler',
    'MeasurementRecord',
    'StateVector',
    'CertificationConfig',
    'CertificationReport',
    'certify',
    'RecordStore',
    'RunLedger',
    'RunManifest',
    'get_config',
    'setup_logging',
    'get_logger'
]
