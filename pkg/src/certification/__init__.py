# src/certification/__init__.py
from .algorithm import CertificationConfig, CertificationReport, Verdict, certify
from .estimators import EstimatorPlan, build_estimator_plan, estimate_from_records
from .monte_carlo import monte_carlo_validation
from .routing import certify_stabilizer_state

__all__ = [
    'CertificationConfig', 'CertificationReport', 'Verdict', 'certify',
    'EstimatorPlan', 'build_estimator_plan', 'estimate_from_records',
    'monte_carlo_validation', 'certify_stabilizer_state',
]
