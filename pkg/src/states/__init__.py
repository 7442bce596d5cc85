# src/states/__init__.py
from .graphs import GraphSpec, even_degree_bipartition
from .stabilizer import StabilizerTableau, StateClass, classify, pauli_expectation
from .statevector import (
    BasisHistogram, EnsembleSampler, MeasurementRecord, MixedStateEnsemble, StateVector
)
from .noise import apply_noise, parse_noise_model

__all__ = [
    'GraphSpec', 'even_degree_bipartition',
    'StabilizerTableau', 'StateClass', 'classify', 'pauli_expectation',
    'BasisHistogram', 'EnsembleSampler', 'MeasurementRecord', 'MixedStateEnsemble', 'StateVector',
    'apply_noise', 'parse_noise_model',
]
