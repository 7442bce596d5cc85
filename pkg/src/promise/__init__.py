# src/promise/__init__.py
from .conditions import PromiseConditionSet, PromiseVerdict, certify_under_promise, evaluate_conditions
from .diagrams import AssignmentDiagram, classify_assignments, witness_tableau

__all__ = [
    'PromiseConditionSet', 'PromiseVerdict', 'certify_under_promise', 'evaluate_conditions',
    'AssignmentDiagram', 'classify_assignments', 'witness_tableau',
]
