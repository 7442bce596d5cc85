"""
UCERT - Empirical estimators from uniform measurements

An EstimatorPlan fixes the measurement bases and, for every vertex v, the
weights w_j such that Σ_j w_j ⟨∏_{i∈V'(v)} (n_j·σ)_i⟩ = ⟨M_v⟩. With |V'(v)| = k
and x–z plane angles θ_j the weights must satisfy

    Σ_j w_j cos^α θ_j sin^(k-α) θ_j = δ_{α, k-1},   α = 0..k,

which the plan checks against the decomposition oracle when it is built.

When no closed neighbourhood exceeds three sites the three fixed bases x,
(x+z)/√2 and (x-z)/√2 suffice:

    k = 3:  √2·(b+ b+ b+  +  b- b- b-) - bx bx bx
    k = 2:  b+ b+ - b- b-
    k = 1:  bx
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..operators.pauli import (
    MeasurementDirection,
    bit_parity_signs,
    decomposition_matrix,
    theta_grid,
    uniform_expectation_decomposition,
)
from ..states.graphs import GraphSpec
from ..states.statevector import (
    MeasurementData,
    MeasurementRecord,
    StateLike,
    measurement_probabilities,
)
from ..utils.errors import ArgumentError, ConfigurationError, DimensionError
from ..utils.logger import get_logger
from .operators import StabilizerCombination, SymmetryOperator, stabilizer_combinations

logger = get_logger(__name__)

SELF_TEST_TOLERANCE = 1e-12
SQRT2 = math.sqrt(2.0)

X_BASIS_ANGLE = math.pi / 2
THREE_BASES: Tuple[Tuple[str, float], ...] = (
    ("x", math.pi / 2),
    ("xz_plus", math.pi / 4),
    ("xz_minus", 3 * math.pi / 4),
)
THREE_BASIS_WEIGHTS: Dict[int, Tuple[float, float, float]] = {
    1: (1.0, 0.0, 0.0),
    2: (0.0, 1.0, -1.0),
    3: (-1.0, SQRT2, SQRT2),
}


@dataclass(frozen=True)
class MeasurementBasis:
    """A named x–z plane direction at angle θ from z."""
    label: str
    theta: float

    @property
    def direction(self) -> MeasurementDirection:
        return MeasurementDirection.from_angle(self.theta, ("z", "x"))


@dataclass(frozen=True)
class VertexEstimator:
    combination: StabilizerCombination
    weights: Tuple[float, ...]

    @property
    def vertex(self) -> int:
        return self.combination.vertex

    @property
    def support(self) -> Tuple[int, ...]:
        return self.combination.support


@dataclass(frozen=True)
class EstimatorPlan:
    """Measurement schedule plus per-vertex basis weights for one target graph."""
    graph: GraphSpec
    bases: Tuple[MeasurementBasis, ...]
    vertices: Tuple[VertexEstimator, ...]
    symmetry: SymmetryOperator
    schedule: str
    boundary_constant: Optional[float] = None

    @property
    def n_qubits(self) -> int:
        return self.graph.n_vertices

    @property
    def x_index(self) -> int:
        for j, basis in enumerate(self.bases):
            if math.isclose(basis.theta, X_BASIS_ANGLE, abs_tol=1e-12):
                return j
        raise ConfigurationError("Estimator plan has no x basis")

    @property
    def basis_labels(self) -> List[str]:
        return [b.label for b in self.bases]


@dataclass(frozen=True)
class Estimates:
    u_hat: float
    m_hat: Tuple[float, ...]


# ---------------------------------------------------------------------------
# Plan construction
# ---------------------------------------------------------------------------

def _grid_bases(sizes: Sequence[int]) -> List[MeasurementBasis]:
    bases = [MeasurementBasis("x", X_BASIS_ANGLE)]
    for k in sorted(set(sizes)):
        for j, theta in enumerate(theta_grid(k)):
            if any(math.isclose(theta, b.theta, abs_tol=1e-12) for b in bases):
                continue
            bases.append(MeasurementBasis(f"theta_{k}_{j}", theta))
    return bases


def _basis_index(bases: Sequence[MeasurementBasis], theta: float) -> int:
    for j, basis in enumerate(bases):
        if math.isclose(basis.theta, theta, abs_tol=1e-12):
            return j
    raise ConfigurationError(f"No basis at θ = {theta}")


def _grid_weights(k: int, bases: Sequence[MeasurementBasis]) -> Tuple[float, ...]:
    thetas = theta_grid(k)
    A = decomposition_matrix(thetas, k)
    target = np.zeros(k + 1)
    target[k - 1] = 1.0
    local = np.linalg.solve(A.T, target)
    weights = np.zeros(len(bases))
    for theta, w in zip(thetas, local):
        weights[_basis_index(bases, theta)] += w
    return tuple(float(w) for w in weights)


def build_estimator_plan(
    graph: GraphSpec,
    self_test: bool = True,
    tolerance: float = SELF_TEST_TOLERANCE
) -> EstimatorPlan:
    """
    Choose bases and weights for every M_v of ``graph``.

    Raises:
        NotCertifiableError: graph outside the bipartite even-degree family
        ConfigurationError: the self-test rejects the weights
    """
    combos = stabilizer_combinations(graph)
    symmetry = SymmetryOperator.from_graph(graph)
    sizes = [c.size for c in combos]

    if max(sizes) <= 3:
        bases = tuple(MeasurementBasis(label, theta) for label, theta in THREE_BASES)
        vertices = tuple(VertexEstimator(c, THREE_BASIS_WEIGHTS[c.size]) for c in combos)
        schedule = "three-basis"
    else:
        bases = tuple(_grid_bases(sizes))
        vertices = tuple(VertexEstimator(c, _grid_weights(c.size, bases)) for c in combos)
        schedule = "theta-grid"

    plan = EstimatorPlan(graph, bases, vertices, symmetry, schedule)
    if self_test:
        plan = run_self_test(plan, tolerance)
    logger.debug(f"Estimator plan for {graph!r}: {schedule}, bases {plan.basis_labels}")
    return plan


def run_self_test(plan: EstimatorPlan, tolerance: float = SELF_TEST_TOLERANCE) -> EstimatorPlan:
    """
    Check every vertex's weights against the cos/sin decomposition oracle.

    Returns the plan with ``boundary_constant`` set to the verified weight on
    b+ b+ for two-site neighbourhoods (1.0 for the three-basis schedule).
    """
    for est in plan.vertices:
        k = est.combination.size
        recovered = np.zeros(k + 1)
        for w, basis in zip(est.weights, plan.bases):
            if w == 0:
                continue
            for coeff, alpha in uniform_expectation_decomposition(k, basis.theta):
                recovered[alpha] += w * coeff
        expected = np.zeros(k + 1)
        expected[k - 1] = 1.0
        if not np.allclose(recovered, expected, atol=tolerance, rtol=0.0):
            raise ConfigurationError(
                f"Estimator self-test failed at vertex {est.vertex}: "
                f"weights reproduce {np.round(recovered, 12).tolist()} instead of E({k - 1})"
            )

    boundary_constant = None
    if plan.schedule == "three-basis":
        two_site = [e for e in plan.vertices if e.combination.size == 2]
        if two_site:
            boundary_constant = two_site[0].weights[_basis_index(plan.bases, math.pi / 4)]
            logger.debug(f"Self-test verified two-site estimator constant {boundary_constant}")

    return EstimatorPlan(
        plan.graph, plan.bases, plan.vertices, plan.symmetry, plan.schedule, boundary_constant
    )


# ---------------------------------------------------------------------------
# Estimation
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BornDistribution:
    """Exact outcome distribution; stands in for records in the infinite-shot limit."""
    direction: MeasurementDirection
    n_qubits: int
    probabilities: np.ndarray
    shots: Optional[int] = None

    def product_mean(self, qubits: Sequence[int]) -> float:
        mask = 0
        for q in qubits:
            mask |= 1 << (self.n_qubits - q)
        signs = bit_parity_signs(np.arange(self.probabilities.size), mask)
        return float(signs @ self.probabilities)


DataLike = Union[MeasurementData, BornDistribution]


def _align(data: Union[Mapping[str, DataLike], Sequence[DataLike]], plan: EstimatorPlan) -> List[DataLike]:
    if isinstance(data, Mapping):
        missing = [b.label for b in plan.bases if b.label not in data]
        if missing:
            raise ArgumentError(f"Missing measurement data for bases {missing}")
        ordered = [data[b.label] for b in plan.bases]
    else:
        ordered = list(data)
        if len(ordered) != len(plan.bases):
            raise ArgumentError(f"Expected {len(plan.bases)} bases, got {len(ordered)}")

    for item, basis in zip(ordered, plan.bases):
        if not item.direction.matches(basis.direction):
            raise ArgumentError(
                f"Basis mismatch: data along {item.direction.label}, plan expects {basis.label}"
            )
        if item.n_qubits != plan.n_qubits:
            raise DimensionError(f"Data on {item.n_qubits} qubits, target has {plan.n_qubits}")

    finite = {item.shots for item in ordered if item.shots is not None}
    if len(finite) > 1:
        raise ArgumentError(f"Shot counts differ between bases: {sorted(finite)}")
    return ordered


def estimate_from_records(
    data: Union[Mapping[str, DataLike], Sequence[DataLike]],
    plan: EstimatorPlan
) -> Estimates:
    """
    u_hat and m_hat from per-basis records, histograms or exact distributions.

    ``data`` is ordered like ``plan.bases`` or keyed by basis label.
    """
    ordered = _align(data, plan)
    u_hat = ordered[plan.x_index].product_mean(plan.symmetry.qubits)
    m_hat = []
    for est in plan.vertices:
        value = 0.0
        for w, item in zip(est.weights, ordered):
            if w:
                value += w * item.product_mean(est.support)
        m_hat.append(float(value))
    return Estimates(float(u_hat), tuple(m_hat))


def per_shot_terms(records: Sequence[MeasurementRecord], plan: EstimatorPlan, vertex: int) -> np.ndarray:
    """Per-shot value of vertex ``vertex``'s weighted combination (records only)."""
    ordered = _align(records, plan)
    est = plan.vertices[vertex - 1]
    values = np.zeros(ordered[0].shots)
    for w, record in zip(est.weights, ordered):
        if w:
            values += w * record.product_values(est.support)
    return values


def exact_estimates(rho: StateLike, plan: EstimatorPlan) -> Estimates:
    """Infinite-shot limit of estimate_from_records."""
    distributions = [
        BornDistribution(b.direction, plan.n_qubits, measurement_probabilities(rho, b.direction))
        for b in plan.bases
    ]
    return estimate_from_records(distributions, plan)


def per_shot_range(plan: EstimatorPlan) -> float:
    """Largest |per-shot term| any vertex estimator can produce (Σ|w_j|)."""
    return max(sum(abs(w) for w in est.weights) for est in plan.vertices)
