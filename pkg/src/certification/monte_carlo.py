"""
UCERT - Monte Carlo validation of the certification guarantee

For each grid point (N, ε, fidelity) the target path graph state is corrupted to
the requested fidelity once, then certified in many independent trials. The
Certified rate is reported with a Wilson 95% interval and checked one-sidedly:

    high-fidelity regime (F > 1 - ε):       rate ≥ 2/3 - half-width
    low-fidelity regime (F < 1 - 8N√ε):     rate ≤ 1/3 + half-width
    otherwise:                              no assertion
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import pandas as pd
from tqdm import tqdm

from ..states.graphs import GraphSpec
from ..states.noise import ReplaceWithOrthogonal, apply_noise
from ..states.statevector import EnsembleSampler, prepare_graph_state
from ..utils.errors import ArgumentError
from ..utils.logger import get_logger
from ..utils.seeding import derive_seed
from .algorithm import CertificationConfig, Verdict, certify
from .bounds import hoeffding_failure_bound
from .estimators import build_estimator_plan

logger = get_logger(__name__)

WILSON_Z = 1.959963984540054
MIN_TRIALS = 100
LOW_FIDELITY_MARGIN = 0.01

TABLE_COLUMNS = [
    "N", "epsilon", "fidelity", "trials", "certified_rate", "wilson_lo", "wilson_hi",
    "regime", "assertion_holds", "shots_per_basis", "predicted_failure_bound",
]


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ArgumentError("Wilson interval needs at least one trial")
    p = successes / trials
    denom = 1.0 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def default_epsilon(n_qubits: int) -> float:
    return 1.0 / (128.0 * n_qubits * n_qubits)


def low_fidelity(n_qubits: int, epsilon: float, margin: float = LOW_FIDELITY_MARGIN) -> float:
    return 1.0 - 8.0 * n_qubits * math.sqrt(epsilon) - margin


def fidelity_regime(n_qubits: int, epsilon: float, fidelity: float) -> str:
    if fidelity > 1.0 - epsilon:
        return "high"
    if fidelity < 1.0 - 8.0 * n_qubits * math.sqrt(epsilon):
        return "low"
    return "intermediate"


@dataclass(frozen=True)
class GridPoint:
    n_qubits: int
    epsilon: float
    fidelity: float

    def __post_init__(self):
        if self.n_qubits < 3 or self.n_qubits % 2 == 0:
            raise ArgumentError(f"Grid points use odd path graphs with N >= 3, got N={self.n_qubits}")
        if not 0.0 <= self.fidelity <= 1.0:
            raise ArgumentError(f"fidelity must lie in [0, 1], got {self.fidelity}")

    @property
    def regime(self) -> str:
        return fidelity_regime(self.n_qubits, self.epsilon, self.fidelity)


def parse_grid(spec: Iterable[str]) -> List[GridPoint]:
    """
    Grid entries "N:epsilon:fidelity".

    epsilon may be "auto" (1/(128N²)); fidelity may be "high" (1.0), "low"
    (1 - 8N√ε - 0.01) or a number. Missing fields default to auto/high.

    Example:
        >>> parse_grid(["3:auto:high", "5:1e-4:low"])[0].fidelity
        1.0
    """
    points = []
    for entry in spec:
        entry = entry.strip()
        if not entry:
            continue
        fields = entry.split(":")
        try:
            n = int(fields[0])
            eps_field = fields[1] if len(fields) > 1 else "auto"
            fid_field = fields[2] if len(fields) > 2 else "high"
            eps = default_epsilon(n) if eps_field == "auto" else float(eps_field)
            if fid_field == "high":
                fid = 1.0
            elif fid_field == "low":
                fid = low_fidelity(n, eps)
            else:
                fid = float(fid_field)
        except (ValueError, IndexError) as e:
            raise ArgumentError(f"Invalid grid entry {entry!r}: {e}") from None
        points.append(GridPoint(n, eps, fid))

    if not points:
        raise ArgumentError("Monte Carlo grid is empty")
    return points


def _point_sampler(point: GridPoint, seed: int, point_index: int) -> EnsembleSampler:
    target = prepare_graph_state(GraphSpec.path(point.n_qubits))
    noise_seed = derive_seed(seed, "montecarlo", "state", point_index)
    rho = apply_noise(target, ReplaceWithOrthogonal(1.0 - point.fidelity), seed=noise_seed)
    return EnsembleSampler(rho, mode="histogram")


def _run_trials(
    point: GridPoint,
    point_index: int,
    trials: int,
    seed: int,
    workers: int,
    show_progress: bool
) -> List[bool]:
    graph = GraphSpec.path(point.n_qubits)
    plan = build_estimator_plan(graph)
    sampler = _point_sampler(point, seed, point_index)
    for basis in plan.bases:
        sampler.probabilities(basis.direction)

    def one_trial(trial: int) -> bool:
        config = CertificationConfig(
            epsilon=point.epsilon,
            target=graph,
            seed=derive_seed(seed, "montecarlo", point_index, trial),
        )
        return certify(sampler, config, plan=plan).verdict == Verdict.CERTIFIED

    desc = f"N={point.n_qubits} eps={point.epsilon:.2e} F={point.fidelity:.4f}"
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            iterator = pool.map(one_trial, range(trials))
            return list(tqdm(iterator, total=trials, desc=desc, disable=not show_progress))
    return [one_trial(t) for t in tqdm(range(trials), desc=desc, disable=not show_progress)]


def assertion_holds(regime: str, rate: float, lo: float, hi: float) -> Optional[bool]:
    half = (hi - lo) / 2.0
    if regime == "high":
        return rate >= 2.0 / 3.0 - half
    if regime == "low":
        return rate <= 1.0 / 3.0 + half
    return None


def monte_carlo_validation(
    points: Sequence[GridPoint],
    trials: int,
    seed: int = 0,
    workers: int = 1,
    show_progress: bool = True
) -> pd.DataFrame:
    """
    Certified-rate table, one row per grid point, in grid order.

    Trial t at point i uses the seed derived from (seed, "montecarlo", i, t), so
    the table does not depend on the worker count.
    """
    if trials < MIN_TRIALS:
        raise ArgumentError(f"At least {MIN_TRIALS} trials per point are required, got {trials}")
    if not points:
        raise ArgumentError("Monte Carlo grid is empty")

    rows = []
    for i, point in enumerate(points):
        outcomes = _run_trials(point, i, trials, seed, workers, show_progress)
        certified = sum(outcomes)
        rate = certified / trials
        lo, hi = wilson_interval(certified, trials)
        shots = CertificationConfig(point.epsilon, GraphSpec.path(point.n_qubits)).shots
        rows.append({
            "N": point.n_qubits,
            "epsilon": point.epsilon,
            "fidelity": point.fidelity,
            "trials": trials,
            "certified_rate": rate,
            "wilson_lo": lo,
            "wilson_hi": hi,
            "regime": point.regime,
            "assertion_holds": assertion_holds(point.regime, rate, lo, hi),
            "shots_per_basis": shots,
            "predicted_failure_bound": hoeffding_failure_bound(shots, point.epsilon, point.n_qubits),
        })
        logger.info(
            f"N={point.n_qubits} eps={point.epsilon:.3g} F={point.fidelity:.4f} "
            f"({point.regime}): certified {certified}/{trials} [{lo:.3f}, {hi:.3f}]"
        )

    return pd.DataFrame(rows, columns=TABLE_COLUMNS)
