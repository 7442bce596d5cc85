"""
UCERT - Certification of the even-N path graph state under the stabilizer promise

When the unknown state is promised to be a pure stabilizer state, four families
of exact expectation values measured in the x, z, x+z and x-z bases pin it down:

    c1     = ⟨Z1 X2⟩ + ⟨X1 Z2⟩                                   (must be 1)
    c2     = ⟨Z_{N-1} X_N⟩ + ⟨X_{N-1} Z_N⟩                       (must be 1)
    c3[i]  = ⟨X_{i-1} Z_i Z_{i+1}⟩ + ⟨Z_{i-1} X_i Z_{i+1}⟩
             + ⟨Z_{i-1} Z_i X_{i+1}⟩,  i = 2..N-1                 (must be 1)
    c4[i]  = ⟨X_i X_{i+3}⟩,  i = 1..N-3                          (must be 0)

c3 sums the three distinct placements of the single X on sites i-1, i, i+1.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List

from ..operators.pauli import PauliString
from ..states.stabilizer import StabilizerTableau, pauli_expectation
from ..utils.errors import ArgumentError
from ..utils.logger import get_logger

logger = get_logger(__name__)

MIN_QUBITS = 4
C3_INTERPRETATION = "c3 sums the three distinct single-X placements on (i-1, i, i+1)"


class PromiseVerdict(str, Enum):
    IS_TARGET = "IsTargetGraphState"
    IS_NOT = "IsNot"


def check_promise_size(n_qubits: int):
    if n_qubits % 2 or n_qubits < MIN_QUBITS:
        raise ArgumentError(f"Promise conditions need an even N >= {MIN_QUBITS}, got N={n_qubits}")


def pair_terms(n_qubits: int, first: int) -> List[PauliString]:
    """[X Z, Z X] on sites (first, first + 1)."""
    second = first + 1
    return [
        PauliString.from_letters(n_qubits, {first: "X", second: "Z"}),
        PauliString.from_letters(n_qubits, {first: "Z", second: "X"}),
    ]


def triple_terms(n_qubits: int, centre: int) -> List[PauliString]:
    """[X Z Z, Z X Z, Z Z X] on sites (centre - 1, centre, centre + 1)."""
    sites = (centre - 1, centre, centre + 1)
    terms = []
    for x_site in sites:
        letters = {q: ("X" if q == x_site else "Z") for q in sites}
        terms.append(PauliString.from_letters(n_qubits, letters))
    return terms


def separation_term(n_qubits: int, i: int) -> PauliString:
    return PauliString.from_letters(n_qubits, {i: "X", i + 3: "X"})


@dataclass(frozen=True)
class PromiseConditionSet:
    """c1, c2, c3[i] (i = 2..N-1) and c4[i] (i = 1..N-3) on one stabilizer state."""
    n_qubits: int
    c1: int
    c2: int
    c3: List[int]
    c4: List[int]

    @property
    def c3_indices(self) -> range:
        return range(2, self.n_qubits)

    @property
    def c4_indices(self) -> range:
        return range(1, self.n_qubits - 2)

    def violations(self) -> List[str]:
        """Names of the conditions that do not hold, e.g. ['c1', 'c4[2]']."""
        failed = []
        if self.c1 != 1:
            failed.append("c1")
        if self.c2 != 1:
            failed.append("c2")
        failed.extend(f"c3[{i}]" for i, v in zip(self.c3_indices, self.c3) if v != 1)
        failed.extend(f"c4[{i}]" for i, v in zip(self.c4_indices, self.c4) if v != 0)
        return failed

    @property
    def satisfied(self) -> bool:
        return not self.violations()

    def to_dict(self) -> Dict:
        return {
            "n": self.n_qubits,
            "c1": self.c1,
            "c2": self.c2,
            "c3": {str(i): v for i, v in zip(self.c3_indices, self.c3)},
            "c4": {str(i): v for i, v in zip(self.c4_indices, self.c4)},
            "violations": self.violations(),
            "interpretation": C3_INTERPRETATION,
        }


def evaluate_conditions(tableau: StabilizerTableau) -> PromiseConditionSet:
    """
    Evaluate every condition term exactly on the tableau.

    Raises:
        ArgumentError: odd N or N < 4

    Example:
        >>> from ..states.graphs import GraphSpec
        >>> from ..states.stabilizer import graph_state_tableau
        >>> evaluate_conditions(graph_state_tableau(GraphSpec.path(4))).satisfied
        True
    """
    n = tableau.n_qubits
    check_promise_size(n)

    def total(terms: List[PauliString]) -> int:
        return sum(pauli_expectation(tableau, p) for p in terms)

    conditions = PromiseConditionSet(
        n_qubits=n,
        c1=total(pair_terms(n, 1)),
        c2=total(pair_terms(n, n - 1)),
        c3=[total(triple_terms(n, i)) for i in range(2, n)],
        c4=[pauli_expectation(tableau, separation_term(n, i)) for i in range(1, n - 2)],
    )
    logger.debug(f"Promise conditions for N={n}: violations {conditions.violations()}")
    return conditions


def certify_under_promise(tableau: StabilizerTableau) -> PromiseVerdict:
    """IsTargetGraphState iff c1 = c2 = 1, every c3 = 1 and every c4 = 0."""
    conditions = evaluate_conditions(tableau)
    verdict = PromiseVerdict.IS_TARGET if conditions.satisfied else PromiseVerdict.IS_NOT
    logger.info(f"Promise check on N={tableau.n_qubits}: {verdict.value}")
    return verdict
