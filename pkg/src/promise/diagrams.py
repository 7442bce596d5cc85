"""
UCERT - Assignment diagrams behind the promise argument

Each condition c1, c3[2..N-1], c2 is one "line" of Pauli strings (circles); on a
stabilizer state every string has expectation 0 or ±1, so a line summing to 1
with no negative terms has exactly one circle set to 1. Two circles on
different lines are linked when their strings anticommute, and linked circles
cannot both be 1.

classify_assignments enumerates every consistent choice of one circle per
line. Besides the path graph state (the middle circle of every interior line)
each surviving diagram contains a pair X_{i-1} Z_i Z_{i+1}, Z_i Z_{i+1} X_{i+2}
on neighbouring lines, whose product X_{i-1} X_{i+2} is then a stabilizer and
violates c4.
"""

from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from ..operators.binary import gf2_rank, gf2_rref, gf2_solve_left
from ..operators.pauli import PauliString, anticommutes
from ..states.stabilizer import StabilizerTableau
from ..utils.errors import ArgumentError
from ..utils.logger import get_logger
from .conditions import check_promise_size, pair_terms, separation_term, triple_terms

logger = get_logger(__name__)

PAIR_NAMES = ("a", "b")
TRIPLE_NAMES = ("A", "B", "C")


@dataclass(frozen=True)
class DiagramLine:
    """One condition line: its name and the strings (circles) it sums."""
    name: str
    circle_names: Tuple[str, ...]
    strings: Tuple[PauliString, ...]


def diagram_lines(n_qubits: int) -> List[DiagramLine]:
    """Lines c1, c3[2], ..., c3[N-1], c2 in chain order."""
    check_promise_size(n_qubits)
    lines = [DiagramLine("c1", PAIR_NAMES, tuple(pair_terms(n_qubits, 1)))]
    for i in range(2, n_qubits):
        lines.append(DiagramLine(f"c3[{i}]", TRIPLE_NAMES, tuple(triple_terms(n_qubits, i))))
    lines.append(DiagramLine("c2", PAIR_NAMES, tuple(pair_terms(n_qubits, n_qubits - 1))))
    return lines


@dataclass(frozen=True)
class AssignmentDiagram:
    """
    One consistent assignment: ``choices[k]`` is the circle set to 1 on line k.

    Example:
        >>> d = classify_assignments(4)[0]
        >>> d.code
        'a A C b'
    """
    n_qubits: int
    choices: Tuple[int, ...]

    @property
    def lines(self) -> List[DiagramLine]:
        return diagram_lines(self.n_qubits)

    @property
    def assignments(self) -> List[Tuple[int, ...]]:
        """0/1 value of every circle, line by line."""
        return [
            tuple(1 if c == choice else 0 for c in range(len(line.strings)))
            for line, choice in zip(self.lines, self.choices)
        ]

    @property
    def code(self) -> str:
        return " ".join(line.circle_names[c] for line, c in zip(self.lines, self.choices))

    @property
    def forced_strings(self) -> List[PauliString]:
        return [line.strings[c] for line, c in zip(self.lines, self.choices)]

    @property
    def is_graph_state(self) -> bool:
        """The path graph state sets every interior line's middle circle."""
        return all(c == 1 for c in self.choices[1:-1])

    def forced_separations(self) -> List[int]:
        """Indices i with X_i X_{i+3} in the group generated by the forced strings."""
        rows = np.vstack([p.symplectic for p in self.forced_strings])
        echelon = gf2_rref(rows)
        return [
            i for i in range(1, self.n_qubits - 2)
            if gf2_solve_left(echelon, separation_term(self.n_qubits, i).symplectic) is not None
        ]

    def to_dict(self) -> Dict:
        return {
            "n": self.n_qubits,
            "code": self.code,
            "strings": [p.label for p in self.forced_strings],
            "graph_state": self.is_graph_state,
            "forced_separations": self.forced_separations(),
        }


def _links(lines: List[DiagramLine]) -> Dict[Tuple[int, int], List[Tuple[int, int]]]:
    """For each (line, circle) the earlier (line, circle) pairs it anticommutes with."""
    links: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    for k, line in enumerate(lines):
        for c, string in enumerate(line.strings):
            links[(k, c)] = [
                (j, d)
                for j in range(k)
                for d, other in enumerate(lines[j].strings)
                if anticommutes(string, other)
            ]
    return links


def classify_assignments(n_qubits: int) -> List[AssignmentDiagram]:
    """
    Every choice of one circle per line with no two linked circles both set.

    Depth-first over the lines in chain order; circles are tried in name
    order, so the output order is deterministic.

    Raises:
        ArgumentError: odd N or N < 4
    """
    lines = diagram_lines(n_qubits)
    links = _links(lines)
    found: List[AssignmentDiagram] = []

    def extend(chosen: List[int]):
        k = len(chosen)
        if k == len(lines):
            found.append(AssignmentDiagram(n_qubits, tuple(chosen)))
            return
        for c in range(len(lines[k].strings)):
            if any(chosen[j] == d for j, d in links[(k, c)]):
                continue
            extend(chosen + [c])

    extend([])
    logger.info(
        f"N={n_qubits}: {len(found)} consistent diagrams "
        f"({', '.join(d.code for d in found)})"
    )
    return found


def _candidates(n_qubits: int) -> Iterator[PauliString]:
    """Positive Pauli strings by increasing weight; Z before X before Y at each site."""
    for weight in range(1, n_qubits + 1):
        for support in combinations(range(1, n_qubits + 1), weight):
            for letters in product("ZXY", repeat=weight):
                yield PauliString.from_letters(n_qubits, dict(zip(support, letters)))


def _in_span(generators: List[PauliString], string: PauliString) -> Optional[PauliString]:
    """The signed group element with the same letters as ``string``, if any."""
    echelon = gf2_rref(np.vstack([g.symplectic for g in generators]))
    coeffs = gf2_solve_left(echelon, string.symplectic)
    if coeffs is None:
        return None
    member = PauliString.identity(string.n_qubits)
    for i in np.nonzero(coeffs)[0]:
        member = member.compose(generators[int(i)])
    return member


def witness_tableau(diagram: AssignmentDiagram) -> StabilizerTableau:
    """
    A stabilizer state holding every forced string of ``diagram`` with sign +1.

    Forced strings that are products of earlier ones are dropped; the group is
    then completed with the lowest-weight commuting strings outside its span.

    Raises:
        ArgumentError: the forced strings multiply to a negative group element
    """
    n = diagram.n_qubits
    generators: List[PauliString] = []
    for string in diagram.forced_strings:
        if generators:
            member = _in_span(generators, string)
            if member is not None:
                if member.sign != string.sign:
                    raise ArgumentError(f"Diagram {diagram.code} forces both {string.label} and its negative")
                continue
        generators.append(string)

    for candidate in _candidates(n):
        if len(generators) == n:
            break
        if any(anticommutes(candidate, g) for g in generators):
            continue
        rows = np.vstack([g.symplectic for g in generators] + [candidate.symplectic])
        if gf2_rank(rows) > len(generators):
            generators.append(candidate)

    logger.debug(f"Witness for diagram {diagram.code}: {[g.label for g in generators]}")
    return StabilizerTableau(tuple(generators))
