"""
UCERT - Sample counts and fidelity bounds

Closed-form quantities behind the certification guarantee. Logarithms and
exponentials are natural (base e).
"""

import math
from typing import Iterable, Tuple

from ..utils.errors import ArgumentError

SHOT_COUNT_CONSTANT = 32 * math.log(12) / 25


def _check_expectation(value: float, name: str = "expectation"):
    if not -1.0 - 1e-12 <= value <= 1.0 + 1e-12:
        raise ArgumentError(f"{name} must lie in [-1, 1], got {value}")


def default_shot_count(epsilon: float) -> int:
    """
    Shots per basis, T = ceil(32·ln 12 / (25·ε²)).

    Example:
        >>> default_shot_count(0.01)
        31807
    """
    if not epsilon > 0:
        raise ArgumentError(f"epsilon must be positive, got {epsilon}")
    return int(math.ceil(SHOT_COUNT_CONSTANT / (epsilon * epsilon)))


def certification_thresholds(epsilon: float) -> Tuple[float, float]:
    """(symmetry threshold 1 - 13ε/4, stabilizer threshold 1 - 9√ε)."""
    return 1.0 - 13.0 * epsilon / 4.0, 1.0 - 9.0 * math.sqrt(epsilon)


def corollary1_bounds(u_expect: float) -> float:
    """
    Bound √(2ε), ε = 1 - ⟨U_X⟩, on |⟨P⟩| for every Pauli string P anticommuting with U_X.
    """
    _check_expectation(u_expect, "⟨U_X⟩")
    return math.sqrt(2.0 * max(0.0, 1.0 - u_expect))


def lemma2_fidelity_lower_bound(expectations: Iterable[float]) -> float:
    """F ≥ 1 - Σ_i (1 - ⟨g_i⟩)/2 over the stabilizer generators."""
    return 1.0 - sum((1.0 - float(e)) / 2.0 for e in expectations)


def lemma2_group_element_bound(fidelity: float) -> float:
    """Every stabilizer group element P satisfies ⟨P⟩ ≥ 1 - 2√(1 - F)."""
    if not -1e-12 <= fidelity <= 1.0 + 1e-12:
        raise ArgumentError(f"fidelity must lie in [0, 1], got {fidelity}")
    return 1.0 - 2.0 * math.sqrt(max(0.0, 1.0 - fidelity))


def lemma2_fidelity_bounds(expectations: Iterable[float] = None, fidelity: float = None) -> float:
    """
    Either direction of the stabilizer-fidelity relation.

    Given generator expectations, returns the fidelity lower bound; given a
    fidelity, returns the lower bound on every group-element expectation.
    """
    if (expectations is None) == (fidelity is None):
        raise ArgumentError("Pass exactly one of expectations or fidelity")
    if expectations is not None:
        return lemma2_fidelity_lower_bound(expectations)
    return lemma2_group_element_bound(fidelity)


def lemma3_symmetry_bound(u_expect: float) -> float:
    """F ≤ 1 - (1 - ⟨U_X⟩)/2 for any target stabilized by U_X."""
    _check_expectation(u_expect, "⟨U_X⟩")
    return 1.0 - (1.0 - u_expect) / 2.0


def hoeffding_failure_bound(shots: int, epsilon: float, n_qubits: int) -> float:
    """Union bound 2·exp(-25Tε²/32) + 2N·exp(-Tε/18) on a bad estimate."""
    if shots < 1 or epsilon <= 0 or n_qubits < 1:
        raise ArgumentError("shots, epsilon and N must be positive")
    return (
        2.0 * math.exp(-25.0 * shots * epsilon ** 2 / 32.0)
        + 2.0 * n_qubits * math.exp(-shots * epsilon / 18.0)
    )


def fidelity_lower_bound(stabilizer_estimates: Iterable[float]) -> float:
    """Fidelity lower bound from estimated stabilizer values, clipped to [0, 1]."""
    return min(1.0, max(0.0, lemma2_fidelity_lower_bound(stabilizer_estimates)))
