"""
UCERT - Graph-state certification with uniform measurements

1. Take T shots along each basis of the estimator plan.
2. Failed if u_hat < 1 - 13ε/4.
3. Otherwise Certified iff m_hat_v > 1 - 9√ε for every vertex v.
"""

import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Optional, Protocol, Sequence, Tuple

from ..operators.pauli import MeasurementDirection
from ..states.graphs import GraphSpec
from ..states.statevector import MeasurementData
from ..utils.errors import ArgumentError, ConfigurationError, DimensionError
from ..utils.logger import get_logger
from ..utils.seeding import derive_seed
from .bounds import certification_thresholds, default_shot_count, fidelity_lower_bound
from .estimators import EstimatorPlan, Estimates, build_estimator_plan, estimate_from_records

logger = get_logger(__name__)


class Verdict(str, Enum):
    CERTIFIED = "Certified"
    FAILED = "Failed"


class MeasurementSampler(Protocol):
    """Anything that can produce uniform-measurement data for a state."""

    n_qubits: int

    def sample(self, direction: MeasurementDirection, shots: int, seed: int) -> MeasurementData:
        ...


def max_epsilon(n_qubits: int) -> float:
    """Exclusive upper bound 1/(64N²) on ε."""
    return 1.0 / (64.0 * n_qubits * n_qubits)


@dataclass(frozen=True)
class CertificationConfig:
    """
    Run parameters for one certification.

    ``shots_per_basis`` defaults to ceil(32·ln 12/(25ε²)); any explicit value is
    honoured and flagged in the report.
    """
    epsilon: float
    target: GraphSpec
    seed: int = 0
    shots_per_basis: Optional[int] = None

    def __post_init__(self):
        n = self.target.n_vertices
        if not 0 < self.epsilon < max_epsilon(n):
            raise ConfigurationError(
                f"epsilon must lie in (0, 1/(64N^2)) = (0, {max_epsilon(n):.6g}) for N={n}, "
                f"got {self.epsilon}"
            )
        if self.shots_per_basis is not None and self.shots_per_basis < 1:
            raise ConfigurationError(f"shots_per_basis must be positive, got {self.shots_per_basis}")

    @property
    def default_shots(self) -> int:
        return default_shot_count(self.epsilon)

    @property
    def shots(self) -> int:
        return self.shots_per_basis if self.shots_per_basis is not None else self.default_shots

    @property
    def shots_overridden(self) -> bool:
        return self.shots_per_basis is not None and self.shots_per_basis != self.default_shots

    @property
    def thresholds(self) -> Tuple[float, float]:
        return certification_thresholds(self.epsilon)


@dataclass
class CertificationReport:
    """Outcome of one certification run; JSON-serialisable via ``to_dict``."""
    verdict: Verdict
    u_hat: float
    m_hat: List[float]
    epsilon: float
    thresholds: Tuple[float, float]
    shots: int
    seed: int
    bases: List[str]
    graph: Dict
    shots_overridden: bool = False
    failed_step: Optional[str] = None
    fidelity_lower_bound: Optional[float] = None
    schedule: str = "three-basis"
    notes: List[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.verdict == Verdict.CERTIFIED

    def to_dict(self) -> Dict:
        payload = asdict(self)
        payload["verdict"] = self.verdict.value
        payload["thresholds"] = {"u": self.thresholds[0], "m": self.thresholds[1]}
        payload["T"] = payload.pop("shots")
        return payload

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, payload: Mapping) -> "CertificationReport":
        data = dict(payload)
        data["verdict"] = Verdict(data["verdict"])
        data["thresholds"] = (data["thresholds"]["u"], data["thresholds"]["m"])
        data["shots"] = data.pop("T")
        return cls(**data)


def decide_verdict(u_hat: float, m_hat: Sequence[float], epsilon: float) -> Tuple[Verdict, Optional[str]]:
    """
    Pure threshold logic: (verdict, failed step).

    Failed at the symmetry step when u_hat < 1 - 13ε/4 (a tie passes);
    otherwise Certified iff every m_hat > 1 - 9√ε (a tie fails).
    """
    u_threshold, m_threshold = certification_thresholds(epsilon)
    if u_hat < u_threshold:
        return Verdict.FAILED, "symmetry"
    if all(m > m_threshold for m in m_hat):
        return Verdict.CERTIFIED, None
    return Verdict.FAILED, "stabilizers"


def _graph_payload(graph: GraphSpec) -> Dict:
    return {"n": graph.n_vertices, "edges": [list(e) for e in graph.sorted_edges()]}


def build_report(
    estimates: Estimates,
    config: CertificationConfig,
    plan: EstimatorPlan,
    shots: int
) -> CertificationReport:
    verdict, failed_step = decide_verdict(estimates.u_hat, estimates.m_hat, config.epsilon)
    notes = []
    if config.shots_overridden:
        notes.append(f"shots per basis overridden: {shots} (default {config.default_shots})")
    if plan.boundary_constant is not None:
        notes.append(f"two-site estimator constant verified: {plan.boundary_constant:g}")

    return CertificationReport(
        verdict=verdict,
        u_hat=estimates.u_hat,
        m_hat=list(estimates.m_hat),
        epsilon=config.epsilon,
        thresholds=config.thresholds,
        shots=shots,
        seed=config.seed,
        bases=plan.basis_labels,
        graph=_graph_payload(config.target),
        shots_overridden=config.shots_overridden,
        failed_step=failed_step,
        fidelity_lower_bound=fidelity_lower_bound(estimates.m_hat),
        schedule=plan.schedule,
        notes=notes,
    )


def certify(
    sampler: MeasurementSampler,
    config: CertificationConfig,
    plan: Optional[EstimatorPlan] = None
) -> CertificationReport:
    """
    Run the certification protocol against ``sampler``.

    Basis j is sampled with the seed derived from (config.seed, "certify", label_j),
    so the report is a pure function of the sampler and the config.
    """
    plan = plan or build_estimator_plan(config.target)
    if sampler.n_qubits != plan.n_qubits:
        raise DimensionError(f"Sampler has {sampler.n_qubits} qubits, target has {plan.n_qubits}")

    shots = config.shots
    if config.shots_overridden:
        logger.warning(f"Shots per basis overridden: {shots} (default {config.default_shots})")

    data = {}
    for basis in plan.bases:
        data[basis.label] = sampler.sample(
            basis.direction, shots, derive_seed(config.seed, "certify", basis.label)
        )

    estimates = estimate_from_records(data, plan)
    report = build_report(estimates, config, plan, shots)
    logger.info(
        f"{report.verdict.value}: u_hat={report.u_hat:.6f}, "
        f"min m_hat={min(report.m_hat):.6f} (N={plan.n_qubits}, eps={config.epsilon:.3g}, T={shots})"
    )
    return report


class RecordReplaySampler:
    """Serves previously recorded data, one record per basis."""

    def __init__(self, records: Sequence[MeasurementData]):
        if not records:
            raise ArgumentError("No measurement records supplied")
        self.records = list(records)
        sizes = {r.n_qubits for r in self.records}
        if len(sizes) != 1:
            raise DimensionError(f"Records cover different qubit counts: {sorted(sizes)}")
        self.n_qubits = sizes.pop()

    @property
    def shots(self) -> int:
        counts = {r.shots for r in self.records}
        if len(counts) != 1:
            raise ArgumentError(f"Records have different shot counts: {sorted(counts)}")
        return counts.pop()

    def sample(self, direction: MeasurementDirection, shots: int, seed: int) -> MeasurementData:
        for record in self.records:
            if record.direction.matches(direction):
                if record.shots != shots:
                    raise ArgumentError(
                        f"Record along {direction.label} has {record.shots} shots, {shots} requested"
                    )
                return record
        raise ArgumentError(f"No record along {direction.label}")
