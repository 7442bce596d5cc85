"""
UCERT - Certification operators

For a bipartite graph (A, B) with every vertex of A of even degree, U_X = ∏_{v∈B} X_v
stabilizes the graph state, and each vertex v gets the combination

    M_v = Σ_{v'∈V'(v)} X_v' ∏_{v''∈V'(v)\\{v'}} Z_v''

over its closed neighbourhood V'(v). Under the symmetry only the v' = v term
survives, so ⟨M_v⟩ tracks the graph stabilizer of v.
"""

from dataclasses import dataclass
from typing import List, Tuple

from ..operators.pauli import PauliString, symmetric_operators
from ..states.graphs import GraphSpec, even_degree_bipartition


@dataclass(frozen=True)
class SymmetryOperator:
    """U_X = ∏_{v∈B} X_v on the odd-degree-allowed side B."""
    n_qubits: int
    qubits: Tuple[int, ...]

    @classmethod
    def from_graph(cls, graph: GraphSpec) -> "SymmetryOperator":
        _, side_b = even_degree_bipartition(graph)
        return cls(graph.n_vertices, side_b)

    def pauli(self) -> PauliString:
        return PauliString.from_letters(self.n_qubits, {q: "X" for q in self.qubits})


@dataclass(frozen=True)
class StabilizerCombination:
    """M_v: one term per vertex of V'(v), the graph stabilizer of v first."""
    vertex: int
    support: Tuple[int, ...]
    terms: Tuple[PauliString, ...]

    @property
    def generator(self) -> PauliString:
        return self.terms[0]

    @property
    def size(self) -> int:
        return len(self.support)

    def label(self) -> str:
        return " + ".join(t.letters for t in self.terms)


def stabilizer_combinations(graph: GraphSpec) -> List[StabilizerCombination]:
    """
    M_v for every vertex.

    Raises:
        NotCertifiableError: the graph is not bipartite with an all-even side

    Example:
        >>> [c.label() for c in stabilizer_combinations(GraphSpec.path(3))][0]
        'XZI + ZXI'
    """
    even_degree_bipartition(graph)
    n = graph.n_vertices

    combos = []
    for v in graph.vertices:
        support = graph.closed_neighborhood(v)
        # one X among the |V'(v)| sites: alpha = |V'(v)| - 1 Z letters
        terms = symmetric_operators(support, ("z", "x"), n_qubits=n).terms(len(support) - 1)
        ordered = sorted(terms, key=lambda p: p.letter(v) != "X")
        combos.append(StabilizerCombination(v, support, tuple(ordered)))
    return combos
