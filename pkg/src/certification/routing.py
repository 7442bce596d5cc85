"""
UCERT - Certification routes for product and CSS stabilizer states

Product states: measure uniformly along x, y and z; each qubit's fidelity with
its target Bloch vector r_i is (1 + r_i·⟨σ⟩_i)/2.

CSS states: measure uniformly along x and z; every X-type generator is the
signed product of x outcomes over its support, every Z-type generator the same
over z outcomes.
"""

import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from ..operators.pauli import MeasurementDirection
from ..states.graphs import GraphSpec
from ..states.stabilizer import (
    StabilizerTableau,
    StateClass,
    classify,
    css_generators,
    product_bloch_vectors,
)
from ..utils.errors import ArgumentError, DimensionError, NotCertifiableError
from ..utils.logger import get_logger
from ..utils.seeding import derive_seed
from .algorithm import CertificationConfig, MeasurementSampler, Verdict, certify
from .bounds import default_shot_count, fidelity_lower_bound

logger = get_logger(__name__)


class Route(str, Enum):
    PRODUCT = "product"
    CSS = "css"
    GRAPH = "bipartite-even-degree-graph"


@dataclass
class StabilizerCertificationReport:
    """Per-generator (or per-qubit) estimates for the product and CSS routes."""
    route: Route
    verdict: Verdict
    labels: List[str]
    estimates: List[float]
    epsilon: float
    threshold: float
    shots: int
    seed: int
    bases: List[str]
    fidelity_estimate: Optional[float] = None
    fidelity_lower_bound: Optional[float] = None
    notes: List[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.verdict == Verdict.CERTIFIED

    def to_dict(self) -> Dict:
        payload = asdict(self)
        payload["route"] = self.route.value
        payload["verdict"] = self.verdict.value
        payload["T"] = payload.pop("shots")
        return payload

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def route_certification(tableau: StabilizerTableau, graph: Optional[GraphSpec] = None) -> Route:
    """
    Pick the certification route from the state's structural class.

    Raises:
        NotCertifiableError: GeneralStabilizer (no uniform-measurement route)
    """
    state_class = classify(tableau, graph)
    if state_class == StateClass.PRODUCT:
        return Route.PRODUCT
    if state_class == StateClass.CSS:
        return Route.CSS
    if state_class == StateClass.BIPARTITE_EVEN_DEGREE_GRAPH:
        return Route.GRAPH
    raise NotCertifiableError(
        "No uniform-measurement certification route for a general stabilizer state"
    )


def _check_shots(shots: int, epsilon: float):
    if shots < 1:
        raise ArgumentError(f"shots must be positive, got {shots}")
    if not 0 < epsilon < 1:
        raise ArgumentError(f"epsilon must lie in (0, 1), got {epsilon}")


def certify_product_state(
    sampler: MeasurementSampler,
    bloch_vectors: np.ndarray,
    shots: int,
    seed: int = 0,
    epsilon: float = 0.05
) -> StabilizerCertificationReport:
    """
    Estimate each qubit's fidelity from x, y and z uniform measurements.

    Certified iff the product of the per-qubit estimates is at least 1 - ε.
    """
    _check_shots(shots, epsilon)
    targets = np.asarray(bloch_vectors, dtype=float)
    if targets.shape != (sampler.n_qubits, 3):
        raise DimensionError(f"Expected {sampler.n_qubits} x 3 Bloch vectors, got {targets.shape}")

    means = np.zeros((sampler.n_qubits, 3))
    for j, axis in enumerate("xyz"):
        data = sampler.sample(MeasurementDirection.along(axis), shots, derive_seed(seed, "product", axis))
        means[:, j] = data.per_qubit_means()

    per_qubit = (1.0 + np.sum(targets * means, axis=1)) / 2.0
    product = float(np.prod(np.clip(per_qubit, 0.0, 1.0)))
    verdict = Verdict.CERTIFIED if product >= 1.0 - epsilon else Verdict.FAILED
    logger.info(f"Product route: {verdict.value}, fidelity estimate {product:.6f}")

    return StabilizerCertificationReport(
        route=Route.PRODUCT,
        verdict=verdict,
        labels=[f"q{q}" for q in range(1, sampler.n_qubits + 1)],
        estimates=[float(f) for f in per_qubit],
        epsilon=epsilon,
        threshold=1.0 - epsilon,
        shots=shots,
        seed=seed,
        bases=["x", "y", "z"],
        fidelity_estimate=product,
    )


def certify_css_state(
    sampler: MeasurementSampler,
    tableau: StabilizerTableau,
    shots: int,
    seed: int = 0,
    epsilon: float = 0.05
) -> StabilizerCertificationReport:
    """
    Estimate every CSS generator from x and z uniform measurements.

    Certified iff every generator estimate is at least 1 - ε; the reported
    fidelity lower bound is 1 - Σ(1 - ⟨g⟩)/2.
    """
    _check_shots(shots, epsilon)
    if sampler.n_qubits != tableau.n_qubits:
        raise DimensionError(f"Sampler has {sampler.n_qubits} qubits, tableau has {tableau.n_qubits}")

    x_type, z_type = css_generators(tableau)
    records = {
        axis: sampler.sample(MeasurementDirection.along(axis), shots, derive_seed(seed, "css", axis))
        for axis in ("x", "z")
    }

    labels, estimates = [], []
    for axis, gens in (("x", x_type), ("z", z_type)):
        for g in gens:
            labels.append(g.label)
            estimates.append(g.sign * records[axis].product_mean(g.support))

    threshold = 1.0 - epsilon
    verdict = Verdict.CERTIFIED if all(e >= threshold for e in estimates) else Verdict.FAILED
    bound = fidelity_lower_bound(estimates)
    logger.info(f"CSS route: {verdict.value}, fidelity lower bound {bound:.6f}")

    return StabilizerCertificationReport(
        route=Route.CSS,
        verdict=verdict,
        labels=labels,
        estimates=[float(e) for e in estimates],
        epsilon=epsilon,
        threshold=threshold,
        shots=shots,
        seed=seed,
        bases=["x", "z"],
        fidelity_lower_bound=bound,
    )


def certify_stabilizer_state(
    sampler: MeasurementSampler,
    tableau: StabilizerTableau,
    epsilon: float,
    seed: int = 0,
    shots: Optional[int] = None,
    graph: Optional[GraphSpec] = None
):
    """
    Route and run certification for a stabilizer target.

    Returns a StabilizerCertificationReport (product/CSS) or a
    CertificationReport (graph route).
    """
    route = route_certification(tableau, graph)
    logger.info(f"Certification route: {route.value}")

    if route == Route.GRAPH:
        config = CertificationConfig(epsilon=epsilon, target=graph, seed=seed, shots_per_basis=shots)
        return certify(sampler, config)

    shots = shots if shots is not None else default_shot_count(epsilon)
    if route == Route.PRODUCT:
        return certify_product_state(sampler, product_bloch_vectors(tableau), shots, seed, epsilon)
    return certify_css_state(sampler, tableau, shots, seed, epsilon)
