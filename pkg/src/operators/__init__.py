# src/operators/__init__.py
from .pauli import MeasurementDirection, PauliString, count_independent_operators, symmetric_operators

__all__ = ['MeasurementDirection', 'PauliString', 'count_independent_operators', 'symmetric_operators']
