"""
UCERT - Noise channels for imperfect state preparation

Test scaffolding for manufacturing states of known fidelity, not models of any
particular device.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..utils.errors import ArgumentError, DimensionError
from ..utils.logger import get_logger
from ..utils.seeding import make_rng
from .statevector import MixedStateEnsemble, StateLike, StateVector, as_ensemble, rotation_matrix

logger = get_logger(__name__)


def _check_probability(p: float):
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"Noise probability must be in [0, 1], got {p}")


@dataclass(frozen=True)
class Depolarizing:
    """(1-p)ρ + p·I/2^N. Exact basis-state mixture up to ``exact_max_qubits``, sampled beyond."""
    p: float
    exact_max_qubits: int = 10
    samples: int = 1024

    def __post_init__(self):
        _check_probability(self.p)


@dataclass(frozen=True)
class SingleQubitZRotation:
    """Coherent exp(-i·angle·Z/2) on one qubit (1-indexed) of every member."""
    qubit: int
    angle: float


@dataclass(frozen=True)
class ReplaceWithOrthogonal:
    """(1-p)|ψ⟩⟨ψ| + p|φ⟩⟨φ| with ⟨ψ|φ⟩ = 0; the fidelity with ψ is exactly 1-p."""
    p: float

    def __post_init__(self):
        _check_probability(self.p)


NoiseModel = Union[Depolarizing, SingleQubitZRotation, ReplaceWithOrthogonal]


def _apply_single_qubit(amplitudes: np.ndarray, unitary: np.ndarray, qubit: int) -> np.ndarray:
    n = amplitudes.size.bit_length() - 1
    if not 1 <= qubit <= n:
        raise DimensionError(f"Qubit {qubit} outside 1..{n}")
    tensor = amplitudes.reshape((2,) * n)
    tensor = np.moveaxis(np.tensordot(unitary, tensor, axes=([1], [qubit - 1])), 0, qubit - 1)
    return tensor.reshape(-1)


def _depolarize(rho: MixedStateEnsemble, model: Depolarizing, seed: int) -> MixedStateEnsemble:
    n = rho.n_qubits
    if model.p == 0:
        return rho
    dim = 1 << n
    if n <= model.exact_max_qubits:
        indices = np.arange(dim)
        noise_weights = np.full(dim, model.p / dim)
    else:
        rng = make_rng(seed, "noise", "depolarizing")
        indices = rng.integers(0, dim, size=model.samples)
        noise_weights = np.full(model.samples, model.p / model.samples)
        logger.warning(
            f"Depolarizing channel on {n} qubits approximated by {model.samples} sampled basis states"
        )

    weights = np.concatenate([(1 - model.p) * np.asarray(rho.weights), noise_weights])
    states = rho.states + tuple(StateVector.basis(n, int(k)) for k in indices)
    keep = weights > 0
    return MixedStateEnsemble(
        weights[keep] / weights[keep].sum(),
        tuple(s for s, k in zip(states, keep) if k)
    )


def _rotate_z(rho: MixedStateEnsemble, model: SingleQubitZRotation) -> MixedStateEnsemble:
    U = rotation_matrix((0, 0, 1), model.angle)
    states = tuple(StateVector(_apply_single_qubit(s.amplitudes, U, model.qubit)) for s in rho.states)
    return MixedStateEnsemble(rho.weights, states)


def _replace_with_orthogonal(rho: MixedStateEnsemble, model: ReplaceWithOrthogonal, seed: int) -> MixedStateEnsemble:
    if not rho.is_pure:
        raise ArgumentError("replace_with_orthogonal needs a pure input state")
    psi = rho.states[0].amplitudes
    rng = make_rng(seed, "noise", "orthogonal")

    # Gram-Schmidt a random vector against ψ
    while True:
        v = rng.normal(size=psi.size) + 1j * rng.normal(size=psi.size)
        v = v - np.vdot(psi, v) * psi
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            break
    phi = StateVector(v / norm)

    if model.p == 0:
        return rho
    if model.p == 1:
        return MixedStateEnsemble.pure(phi)
    return MixedStateEnsemble(np.array([1 - model.p, model.p]), (rho.states[0], phi))


def apply_noise(rho: StateLike, model: NoiseModel, seed: int = 0) -> MixedStateEnsemble:
    """
    Apply one noise model to a state or ensemble.

    Example:
        >>> noisy = apply_noise(target, ReplaceWithOrthogonal(0.3), seed=7)
        >>> round(fidelity(noisy, target), 10)
        0.7
    """
    rho = as_ensemble(rho)
    if isinstance(model, Depolarizing):
        return _depolarize(rho, model, seed)
    if isinstance(model, SingleQubitZRotation):
        return _rotate_z(rho, model)
    if isinstance(model, ReplaceWithOrthogonal):
        return _replace_with_orthogonal(rho, model, seed)
    raise ArgumentError(f"Unknown noise model {model!r}")


def parse_noise_model(spec: str) -> NoiseModel:
    """
    Parse CLI noise specs: "depolarizing:0.1", "zrot:2:0.05", "orthogonal:0.3".
    """
    parts = spec.strip().split(":")
    kind = parts[0].lower()
    try:
        if kind in ("depolarizing", "depol") and len(parts) == 2:
            return Depolarizing(float(parts[1]))
        if kind in ("zrot", "z_rotation", "single_qubit_z_rotation") and len(parts) == 3:
            return SingleQubitZRotation(int(parts[1]), float(parts[2]))
        if kind in ("orthogonal", "replace_with_orthogonal") and len(parts) == 2:
            return ReplaceWithOrthogonal(float(parts[1]))
    except ValueError as e:
        raise ArgumentError(f"Invalid noise spec {spec!r}: {e}") from None
    raise ArgumentError(
        f"Unknown noise spec {spec!r}; expected depolarizing:<p>, zrot:<qubit>:<angle> or orthogonal:<p>"
    )
