"""
UCERT - Dense statevector simulator

Amplitude vectors of length 2^N with qubit 1 as the most significant index bit.
Outcome bit 0 is reported as +1 (the +1 eigenvalue of the measured direction).
Mixed states are ensembles of pure states rather than density matrices.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..operators.pauli import MeasurementDirection, PauliString, bit_parity_signs
from ..utils.errors import ArgumentError, CapabilityError, DimensionError
from ..utils.logger import get_logger
from ..utils.seeding import make_rng
from .graphs import GraphSpec

logger = get_logger(__name__)

DEFAULT_MAX_QUBITS = 24
NORM_TOLERANCE = 1e-10
AXIS_TOLERANCE = 1e-9
DEFAULT_CHUNK_SHOTS = 1 << 16
DENSITY_MATRIX_MAX_QUBITS = 10

_PAULI_2x2 = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def check_capacity(n_qubits: int, max_qubits: int = DEFAULT_MAX_QUBITS):
    if n_qubits > max_qubits:
        raise CapabilityError(
            f"{n_qubits} qubits exceeds the statevector cap of {max_qubits}"
        )


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.flags.writeable = False
    return array


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalised N-qubit pure state."""
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size < 2 or amps.size & (amps.size - 1):
            raise DimensionError(f"Amplitude vector length must be 2^N, got shape {amps.shape}")
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > NORM_TOLERANCE:
            raise ArgumentError(f"State is not normalised (|ψ|^2 = {norm_sq})")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex], normalize: bool = True) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ArgumentError("Cannot normalise the zero vector")
            amps = amps / norm
        return cls(amps)

    @classmethod
    def basis(cls, n_qubits: int, index: int = 0) -> "StateVector":
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def zero(cls, n_qubits: int) -> "StateVector":
        return cls.basis(n_qubits, 0)

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def overlap(self, other: "StateVector") -> complex:
        _check_dims(self.n_qubits, other.n_qubits)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits})"


@dataclass(frozen=True, eq=False)
class MixedStateEnsemble:
    """ρ = Σ_k w_k |ψ_k⟩⟨ψ_k| with w_k ≥ 0 summing to 1."""
    weights: np.ndarray
    states: Tuple[StateVector, ...]

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float)
        states = tuple(self.states)
        if weights.ndim != 1 or weights.size != len(states) or not states:
            raise DimensionError("Ensemble needs one weight per state and at least one state")
        if np.any(weights < 0):
            raise ArgumentError("Ensemble weights must be non-negative")
        if abs(weights.sum() - 1.0) > NORM_TOLERANCE:
            raise ArgumentError(f"Ensemble weights sum to {weights.sum()}, not 1")
        n = states[0].n_qubits
        if any(s.n_qubits != n for s in states):
            raise DimensionError("Ensemble members act on different numbers of qubits")
        object.__setattr__(self, "weights", _frozen(weights))
        object.__setattr__(self, "states", states)

    @classmethod
    def pure(cls, state: StateVector) -> "MixedStateEnsemble":
        return cls(np.ones(1), (state,))

    @property
    def n_qubits(self) -> int:
        return self.states[0].n_qubits

    @property
    def is_pure(self) -> bool:
        return len(self.states) == 1

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(zip(self.weights, self.states))

    def __repr__(self) -> str:
        return f"MixedStateEnsemble(n_qubits={self.n_qubits}, members={len(self)})"


StateLike = Union[StateVector, MixedStateEnsemble]


def as_ensemble(rho: StateLike) -> MixedStateEnsemble:
    return MixedStateEnsemble.pure(rho) if isinstance(rho, StateVector) else rho


def _check_dims(n1: int, n2: int):
    if n1 != n2:
        raise DimensionError(f"Dimension mismatch: {n1} vs {n2} qubits")


def _qubit_mask(n_qubits: int, qubits: Iterable[int]) -> int:
    mask = 0
    for q in qubits:
        if not 1 <= q <= n_qubits:
            raise DimensionError(f"Qubit {q} outside 1..{n_qubits}")
        mask |= 1 << (n_qubits - q)
    return mask


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    """T x N matrix of ±1 outcomes taken along one uniform direction."""
    direction: MeasurementDirection
    outcomes: np.ndarray

    def __post_init__(self):
        outcomes = np.asarray(self.outcomes)
        if outcomes.ndim != 2 or outcomes.shape[0] < 1 or outcomes.shape[1] < 1:
            raise DimensionError(f"Outcomes must be a non-empty T x N matrix, got {outcomes.shape}")
        if not np.all(np.abs(outcomes) == 1):
            raise ArgumentError("Measurement outcomes must be ±1")
        object.__setattr__(self, "outcomes", _frozen(outcomes.astype(np.int8)))

    @classmethod
    def from_indices(cls, direction: MeasurementDirection, indices: np.ndarray, n_qubits: int) -> "MeasurementRecord":
        """Convert basis-state indices (bit 0 ↔ +1) into ±1 rows."""
        shifts = np.arange(n_qubits - 1, -1, -1, dtype=np.int64)
        bits = (np.asarray(indices, dtype=np.int64)[:, None] >> shifts) & 1
        return cls(direction, (1 - 2 * bits).astype(np.int8))

    @property
    def shots(self) -> int:
        return int(self.outcomes.shape[0])

    @property
    def n_qubits(self) -> int:
        return int(self.outcomes.shape[1])

    def product_values(self, qubits: Sequence[int]) -> np.ndarray:
        """Per-shot ∏_{i∈qubits} b^i."""
        cols = [q - 1 for q in qubits]
        for q in qubits:
            if not 1 <= q <= self.n_qubits:
                raise DimensionError(f"Qubit {q} outside 1..{self.n_qubits}")
        if not cols:
            return np.ones(self.shots, dtype=np.int64)
        return np.prod(self.outcomes[:, cols].astype(np.int64), axis=1)

    def product_mean(self, qubits: Sequence[int]) -> float:
        return float(self.product_values(qubits).mean())

    def per_qubit_means(self) -> np.ndarray:
        return self.outcomes.astype(float).mean(axis=0)

    def to_indices(self) -> np.ndarray:
        bits = (1 - self.outcomes.astype(np.int64)) // 2
        weights = 1 << np.arange(self.n_qubits - 1, -1, -1, dtype=np.int64)
        return bits @ weights

    def to_histogram(self) -> "BasisHistogram":
        values, counts = np.unique(self.to_indices(), return_counts=True)
        return BasisHistogram(self.direction, self.n_qubits, values, counts)

    def __repr__(self) -> str:
        return f"MeasurementRecord(T={self.shots}, N={self.n_qubits}, basis={self.direction.label})"


@dataclass(frozen=True, eq=False)
class BasisHistogram:
    """
    Outcome counts per basis-state index for one uniform direction.

    Carries the same statistics as a MeasurementRecord of the same shots in
    O(2^N) memory, which keeps shot counts in the 10^8 range tractable.
    """
    direction: MeasurementDirection
    n_qubits: int
    indices: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        indices = np.asarray(self.indices, dtype=np.int64)
        counts = np.asarray(self.counts, dtype=np.int64)
        if indices.shape != counts.shape or indices.ndim != 1:
            raise DimensionError("indices and counts must be matching 1-D arrays")
        if np.any(counts < 0) or counts.sum() < 1:
            raise ArgumentError("Histogram counts must be non-negative with at least one shot")
        if indices.size and (indices.min() < 0 or indices.max() >= (1 << self.n_qubits)):
            raise DimensionError("Histogram index outside the 2^N outcome range")
        keep = counts > 0
        object.__setattr__(self, "indices", _frozen(indices[keep]))
        object.__setattr__(self, "counts", _frozen(counts[keep]))

    @property
    def shots(self) -> int:
        return int(self.counts.sum())

    def product_mean(self, qubits: Sequence[int]) -> float:
        signs = bit_parity_signs(self.indices, _qubit_mask(self.n_qubits, qubits))
        return float((signs * self.counts).sum() / self.shots)

    def per_qubit_means(self) -> np.ndarray:
        return np.array([self.product_mean([q]) for q in range(1, self.n_qubits + 1)])

    def to_record(self) -> MeasurementRecord:
        """Expand into shots ordered by outcome index."""
        return MeasurementRecord.from_indices(
            self.direction, np.repeat(self.indices, self.counts), self.n_qubits
        )

    def __repr__(self) -> str:
        return f"BasisHistogram(T={self.shots}, N={self.n_qubits}, basis={self.direction.label})"


MeasurementData = Union[MeasurementRecord, BasisHistogram]


# ---------------------------------------------------------------------------
# Preparation and rotations
# ---------------------------------------------------------------------------

def prepare_graph_state(graph: GraphSpec, max_qubits: int = DEFAULT_MAX_QUBITS) -> StateVector:
    """
    |+⟩^N followed by CZ on every edge.

    Amplitude of basis state b is 2^(-N/2) (-1)^(Σ_{(u,v)∈E} b_u b_v).
    """
    n = graph.n_vertices
    check_capacity(n, max_qubits)

    idx = np.arange(1 << n, dtype=np.int64)
    parity = np.zeros(idx.size, dtype=np.int64)
    for u, v in graph.sorted_edges():
        parity ^= ((idx >> (n - u)) & 1) & ((idx >> (n - v)) & 1)
    amps = (1 - 2 * parity) / np.sqrt(idx.size)
    return StateVector(amps.astype(complex))


def _unit_axis(axis: Sequence[float]) -> np.ndarray:
    vec = np.asarray(axis, dtype=float)
    if vec.shape != (3,):
        raise ArgumentError(f"Rotation axis must be a 3-vector, got shape {vec.shape}")
    if abs(np.linalg.norm(vec) - 1.0) > AXIS_TOLERANCE:
        raise ArgumentError(f"Rotation axis is not a unit vector (|n| = {np.linalg.norm(vec)})")
    return vec


def rotation_matrix(axis: Sequence[float], angle: float) -> np.ndarray:
    """exp(-i·angle·(n·σ)/2) = cos(angle/2)·I - i·sin(angle/2)·n·σ."""
    n = _unit_axis(axis)
    n_sigma = sum(c * s for c, s in zip(n, _PAULI_2x2))
    return np.cos(angle / 2) * np.eye(2, dtype=complex) - 1j * np.sin(angle / 2) * n_sigma


def apply_uniform_unitary(amplitudes: np.ndarray, unitary: np.ndarray) -> np.ndarray:
    """Apply the same 2x2 unitary to every qubit of a raw amplitude vector."""
    psi = np.asarray(amplitudes, dtype=complex)
    n = psi.size.bit_length() - 1
    tensor = psi.reshape((2,) * n)
    for q in range(n):
        tensor = np.moveaxis(np.tensordot(unitary, tensor, axes=([1], [q])), 0, q)
    return tensor.reshape(-1)


def apply_uniform_rotation(state: StateVector, axis: Sequence[float], angle: float) -> StateVector:
    """
    Rotate every qubit by the same angle about the same axis.

    Example:
        >>> s = apply_uniform_rotation(StateVector.zero(2), (0, 1, 0), np.pi / 2)
        >>> np.allclose(s.amplitudes, 0.5)
        True
    """
    U = rotation_matrix(axis, angle)
    amps = apply_uniform_unitary(state.amplitudes, U)
    return StateVector(amps / np.linalg.norm(amps))


def basis_change_unitary(direction: MeasurementDirection) -> np.ndarray:
    """
    Single-qubit U with U†ZU = n·σ, so measuring Z after U measures along n.

    U = (Rz(φ)·Ry(θ))† with n = (sin θ cos φ, sin θ sin φ, cos θ).
    """
    theta = float(np.arccos(np.clip(direction.nz, -1.0, 1.0)))
    phi = float(np.arctan2(direction.ny, direction.nx))
    V = rotation_matrix((0, 0, 1), phi) @ rotation_matrix((0, 1, 0), theta)
    return V.conj().T


# ---------------------------------------------------------------------------
# Measurement
# ---------------------------------------------------------------------------

def _rotated_member_probabilities(rho: MixedStateEnsemble, direction: MeasurementDirection) -> List[np.ndarray]:
    U = basis_change_unitary(direction)
    out = []
    for state in rho.states:
        p = np.abs(apply_uniform_unitary(state.amplitudes, U)) ** 2
        out.append(p / p.sum())
    return out


def measurement_probabilities(rho: StateLike, direction: MeasurementDirection) -> np.ndarray:
    """Born distribution over the 2^N outcomes of a uniform measurement."""
    rho = as_ensemble(rho)
    members = _rotated_member_probabilities(rho, direction)
    probs = sum(w * p for w, p in zip(rho.weights, members))
    return probs / probs.sum()


def _sample_block(
    weights: np.ndarray,
    cdfs: List[np.ndarray],
    shots: int,
    seed: int,
    block: int
) -> np.ndarray:
    rng = make_rng(seed, "shots", block)
    members = rng.choice(len(cdfs), size=shots, p=weights) if len(cdfs) > 1 else np.zeros(shots, dtype=np.int64)
    uniforms = rng.random(shots)
    indices = np.empty(shots, dtype=np.int64)
    for k, cdf in enumerate(cdfs):
        sel = members == k
        if sel.any():
            indices[sel] = np.searchsorted(cdf, uniforms[sel] * cdf[-1], side="right")
    return np.minimum(indices, cdfs[0].size - 1)


def sample_uniform_measurement(
    rho: StateLike,
    direction: MeasurementDirection,
    shots: int,
    seed: int,
    workers: int = 1,
    chunk_shots: int = DEFAULT_CHUNK_SHOTS
) -> MeasurementRecord:
    """
    Per-shot sampling of a uniform measurement.

    Each shot draws an ensemble member by weight, then a full N-bit outcome by
    inverting that member's cumulative Born distribution. Shots are generated in
    fixed-size blocks, block b from the sub-stream (seed, "shots", b), so the
    record is identical for any worker count.
    """
    if shots < 1:
        raise ArgumentError(f"shots must be at least 1, got {shots}")
    rho = as_ensemble(rho)
    cdfs = [np.cumsum(p) for p in _rotated_member_probabilities(rho, direction)]
    weights = np.asarray(rho.weights) / np.sum(rho.weights)

    starts = list(range(0, shots, chunk_shots))
    sizes = [min(chunk_shots, shots - s) for s in starts]
    jobs = [(weights, cdfs, size, seed, b) for b, size in enumerate(sizes)]

    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(lambda job: _sample_block(*job), jobs))
    else:
        blocks = [_sample_block(*job) for job in jobs]

    logger.debug(f"Sampled {shots} shots along {direction.label} ({len(blocks)} blocks)")
    return MeasurementRecord.from_indices(direction, np.concatenate(blocks), rho.n_qubits)


def sample_outcome_counts(
    rho: StateLike,
    direction: MeasurementDirection,
    shots: int,
    seed: int,
    probabilities: Optional[np.ndarray] = None
) -> BasisHistogram:
    """Multinomial draw of the outcome histogram; same distribution as per-shot sampling."""
    if shots < 1:
        raise ArgumentError(f"shots must be at least 1, got {shots}")
    rho = as_ensemble(rho)
    probs = measurement_probabilities(rho, direction) if probabilities is None else probabilities
    rng = make_rng(seed, "histogram")
    counts = rng.multinomial(shots, probs / probs.sum())
    return BasisHistogram(direction, rho.n_qubits, np.arange(probs.size), counts)


class EnsembleSampler:
    """
    Uniform-measurement oracle over a fixed ensemble.

    Born distributions are cached per direction. ``mode`` picks per-shot records,
    multinomial histograms, or ("auto") records while shots·N stays under
    ``record_limit``.
    """

    MODES = ("records", "histogram", "auto")

    def __init__(
        self,
        rho: StateLike,
        mode: str = "auto",
        record_limit: int = 2_000_000,
        workers: int = 1
    ):
        if mode not in self.MODES:
            raise ArgumentError(f"Unknown sampling mode {mode!r}; choose from {self.MODES}")
        self.rho = as_ensemble(rho)
        self.mode = mode
        self.record_limit = record_limit
        self.workers = workers
        self._cache: Dict[Tuple[float, float, float], np.ndarray] = {}

    @property
    def n_qubits(self) -> int:
        return self.rho.n_qubits

    def probabilities(self, direction: MeasurementDirection) -> np.ndarray:
        key = direction.key()
        if key not in self._cache:
            self._cache[key] = measurement_probabilities(self.rho, direction)
        return self._cache[key]

    def sample(self, direction: MeasurementDirection, shots: int, seed: int) -> MeasurementData:
        use_records = self.mode == "records" or (
            self.mode == "auto" and shots * self.n_qubits <= self.record_limit
        )
        if use_records:
            return sample_uniform_measurement(self.rho, direction, shots, seed, workers=self.workers)
        return sample_outcome_counts(
            self.rho, direction, shots, seed, probabilities=self.probabilities(direction)
        )

    def __repr__(self) -> str:
        return f"EnsembleSampler({self.rho!r}, mode={self.mode})"


# ---------------------------------------------------------------------------
# Expectations and fidelities
# ---------------------------------------------------------------------------

def expectation(rho: StateLike, operator: Union[PauliString, Sequence[PauliString]]) -> float:
    """Exact tr(ρ·O) for a Pauli string or a sum of Pauli strings."""
    rho = as_ensemble(rho)
    terms = [operator] if isinstance(operator, PauliString) else list(operator)
    for p in terms:
        _check_dims(p.n_qubits, rho.n_qubits)
    total = 0.0
    for weight, state in rho:
        if weight == 0:
            continue
        total += weight * sum(p.expectation(state.amplitudes) for p in terms)
    return float(total)


def fidelity(rho: StateLike, target: StateVector) -> float:
    """Σ_k w_k |⟨target|ψ_k⟩|²."""
    rho = as_ensemble(rho)
    _check_dims(rho.n_qubits, target.n_qubits)
    return float(sum(w * abs(target.overlap(s)) ** 2 for w, s in rho))


def density_matrix(rho: StateLike, max_qubits: int = DENSITY_MATRIX_MAX_QUBITS) -> np.ndarray:
    rho = as_ensemble(rho)
    check_capacity(rho.n_qubits, max_qubits)
    return sum(w * np.outer(s.amplitudes, s.amplitudes.conj()) for w, s in rho)


# ---------------------------------------------------------------------------
# Random and reference states
# ---------------------------------------------------------------------------

def random_state(n_qubits: int, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state."""
    amps = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    return StateVector.from_amplitudes(amps)


def random_ensemble(n_qubits: int, rng: np.random.Generator, members: int = 3) -> MixedStateEnsemble:
    """Dirichlet-weighted mixture of Haar-random states."""
    weights = rng.dirichlet(np.ones(members))
    return MixedStateEnsemble(weights, tuple(random_state(n_qubits, rng) for _ in range(members)))


def maximally_mixed(n_qubits: int, max_qubits: int = 16) -> MixedStateEnsemble:
    """Uniform mixture of all 2^N computational basis states."""
    check_capacity(n_qubits, max_qubits)
    dim = 1 << n_qubits
    states = tuple(StateVector.basis(n_qubits, k) for k in range(dim))
    return MixedStateEnsemble(np.full(dim, 1.0 / dim), states)
