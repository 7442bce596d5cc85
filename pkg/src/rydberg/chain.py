"""
UCERT - Rydberg chain Hamiltonian and piecewise-constant evolution

H/2π = (Ω/2) Σ_i (|r_i⟩⟨g_i| + h.c.) - Δ Σ_i n_i + Σ_{i<j} C6 n_i n_j / |i-j|^6

with |g⟩ = |0⟩, |r⟩ = |1⟩ and n = |r⟩⟨r|. Matrices returned here are H itself
(angular units, 2π included), so a segment of duration t evolves by exp(-iHt).
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.linalg import eigh

from ..states.statevector import StateVector
from ..utils.errors import ArgumentError, CapabilityError
from ..utils.logger import get_logger
from .schedules import PulseSchedule, PulseSegment

logger = get_logger(__name__)

DEFAULT_MAX_SITES = 14
UNITARITY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class RydbergChainConfig:
    """
    Chain of ``n_sites`` atoms at unit spacing.

    ``interaction_range`` keeps only pairs with |i-j| ≤ range (None keeps the
    full 1/r^6 tail). The certification scheme needs odd ``n_sites``; that is
    checked by the preparation and measurement routines, so the Hamiltonian
    itself can be built for any chain length.
    """
    n_sites: int
    h: float = 20.0
    c6: float = 1.0
    interaction_range: Optional[int] = None
    max_sites: int = DEFAULT_MAX_SITES

    def __post_init__(self):
        if self.n_sites < 1:
            raise ArgumentError(f"n_sites must be positive, got {self.n_sites}")
        if not self.h > 0:
            raise ArgumentError(f"h must be positive, got {self.h}")
        if self.interaction_range is not None and self.interaction_range < 1:
            raise ArgumentError(f"interaction_range must be >= 1, got {self.interaction_range}")

    def check_capacity(self):
        if self.n_sites > self.max_sites:
            raise CapabilityError(
                f"Dense dynamics for {self.n_sites} sites exceeds the cap of {self.max_sites}"
            )

    def require_odd(self):
        if self.n_sites % 2 == 0:
            raise ArgumentError(f"The preparation scheme needs an odd chain, got N={self.n_sites}")

    def coupling(self, i: int, j: int) -> float:
        """C6/|i-j|^6, or 0 beyond the interaction range."""
        distance = abs(i - j)
        if distance == 0:
            return 0.0
        if self.interaction_range is not None and distance > self.interaction_range:
            return 0.0
        return self.c6 / distance ** 6

    def with_h(self, h: float) -> "RydbergChainConfig":
        return RydbergChainConfig(self.n_sites, h, self.c6, self.interaction_range, self.max_sites)


def _occupations(n_sites: int) -> np.ndarray:
    """(2^N, N) matrix of n_i per basis state; site 1 is the most significant bit."""
    idx = np.arange(1 << n_sites, dtype=np.int64)
    shifts = np.arange(n_sites - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(float)


def diagonal_energies(config: RydbergChainConfig, delta: float) -> np.ndarray:
    """Diagonal of H (detuning plus interactions), angular units."""
    occ = _occupations(config.n_sites)
    energy = -delta * occ.sum(axis=1)
    for i in range(config.n_sites):
        for j in range(i + 1, config.n_sites):
            v = config.coupling(i + 1, j + 1)
            if v:
                energy += v * occ[:, i] * occ[:, j]
    return 2 * math.pi * energy


def hamiltonian_matrix(config: RydbergChainConfig, omega: float, delta: float) -> np.ndarray:
    """
    Dense H = 2π·(H/2π) for constant Ω and Δ.

    Example:
        >>> H = hamiltonian_matrix(RydbergChainConfig(1), omega=0.0, delta=2.0)
        >>> bool(np.allclose(np.linalg.eigvalsh(H), [-4 * np.pi, 0.0]))
        True
    """
    config.check_capacity()
    n = config.n_sites
    dim = 1 << n
    H = np.diag(diagonal_energies(config, delta)).astype(complex)
    if omega:
        idx = np.arange(dim)
        for site in range(1, n + 1):
            flip = 1 << (n - site)
            H[idx ^ flip, idx] += 2 * math.pi * omega / 2
    return H


class ChainEvolver:
    """
    Exact piecewise-constant evolution with cached segment spectra.

    Segments with Ω = 0 are diagonal and evolve by phases; the others are
    diagonalised once per (Ω, Δ) and reused for every duration.
    """

    def __init__(self, config: RydbergChainConfig):
        config.check_capacity()
        self.config = config
        self._spectra: Dict[Tuple[float, float], Tuple[np.ndarray, np.ndarray]] = {}
        self._diagonals: Dict[float, np.ndarray] = {}

    def _spectrum(self, omega: float, delta: float) -> Tuple[np.ndarray, np.ndarray]:
        key = (float(omega), float(delta))
        if key not in self._spectra:
            energies, vectors = eigh(hamiltonian_matrix(self.config, omega, delta))
            self._spectra[key] = (energies, vectors)
            logger.debug(f"Diagonalised segment Hamiltonian Ω={omega}, Δ={delta}")
        return self._spectra[key]

    def apply_segment(self, amplitudes: np.ndarray, segment: PulseSegment) -> np.ndarray:
        if segment.omega == 0:
            key = float(segment.delta)
            if key not in self._diagonals:
                self._diagonals[key] = diagonal_energies(self.config, segment.delta)
            return np.exp(-1j * self._diagonals[key] * segment.duration) * amplitudes
        energies, vectors = self._spectrum(segment.omega, segment.delta)
        coeffs = vectors.conj().T @ amplitudes
        return vectors @ (np.exp(-1j * energies * segment.duration) * coeffs)

    def evolve_amplitudes(self, amplitudes: np.ndarray, schedule: PulseSchedule) -> np.ndarray:
        psi = np.asarray(amplitudes, dtype=complex)
        for segment in schedule.segments:
            psi = self.apply_segment(psi, segment)
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > UNITARITY_TOLERANCE:
            raise ArithmeticError(f"Evolution lost unitarity: |ψ| = {norm}")
        return psi / norm

    def evolve(self, state: StateVector, schedule: PulseSchedule) -> StateVector:
        if state.n_qubits != self.config.n_sites:
            raise ArgumentError(
                f"State has {state.n_qubits} qubits, chain has {self.config.n_sites} sites"
            )
        return StateVector(self.evolve_amplitudes(state.amplitudes, schedule))


def evolve(
    state: StateVector,
    schedule: PulseSchedule,
    config: RydbergChainConfig,
    evolver: Optional[ChainEvolver] = None
) -> StateVector:
    """Apply exp(-i H_k t_k) segment by segment."""
    return (evolver or ChainEvolver(config)).evolve(state, schedule)
