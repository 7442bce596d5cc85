"""
UCERT - Stabilizer tableaus

Stabilizer states held as N independent commuting generators. Expectations of
arbitrary Pauli strings are exact ({-1, 0, +1}) and come from GF(2) elimination
on the symplectic generator matrix with sign tracking.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..operators.binary import RowEchelon, gf2_left_nullspace, gf2_rank, gf2_rref, gf2_solve_left
from ..operators.pauli import PauliString, anticommutes
from ..utils.errors import (
    ArgumentError,
    CapabilityError,
    DimensionError,
    NotCertifiableError,
    RecordFormatError,
)
from ..utils.logger import get_logger
from .graphs import GraphSpec, even_degree_bipartition

logger = get_logger(__name__)

GROUP_ENUMERATION_MAX_QUBITS = 16


class StateClass(str, Enum):
    """Structural classes, reported in this priority order."""
    PRODUCT = "Product"
    CSS = "CSS"
    BIPARTITE_EVEN_DEGREE_GRAPH = "BipartiteEvenDegreeGraph"
    GENERAL_STABILIZER = "GeneralStabilizer"


@dataclass(frozen=True)
class StabilizerTableau:
    """
    N independent, pairwise commuting Pauli generators on N qubits.

    The represented state is the unique joint +1 eigenstate of the generators.
    """
    generators: Tuple[PauliString, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ArgumentError("A stabilizer tableau needs at least one generator")
        n = gens[0].n_qubits
        if any(g.n_qubits != n for g in gens):
            raise DimensionError("Generators act on different numbers of qubits")
        if len(gens) != n:
            raise ArgumentError(f"Expected {n} generators for {n} qubits, got {len(gens)}")

        for i, gi in enumerate(gens):
            for j in range(i + 1, len(gens)):
                if anticommutes(gi, gens[j]):
                    raise ArgumentError(f"Generators {gi.label} and {gens[j].label} anticommute")

        object.__setattr__(self, "generators", gens)
        if self.echelon.rank != n:
            raise ArgumentError(
                f"Generators are not independent (symplectic rank {self.echelon.rank} < {n})"
            )

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> "StabilizerTableau":
        return cls(tuple(PauliString.from_label(label) for label in labels))

    @classmethod
    def parse(cls, text: str) -> "StabilizerTableau":
        """Generator-list format: one signed Pauli string per line, '#' comments."""
        labels = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                labels.append((lineno, line))
        if not labels:
            raise RecordFormatError("Generator file contains no Pauli strings")
        try:
            gens = tuple(PauliString.from_label(label) for _, label in labels)
        except ArgumentError as e:
            raise RecordFormatError(f"Invalid generator: {e}") from None
        try:
            return cls(gens)
        except (ArgumentError, DimensionError) as e:
            raise RecordFormatError(f"Invalid generator set: {e}") from None

    @classmethod
    def load(cls, path: Union[str, Path]) -> "StabilizerTableau":
        path = Path(path)
        if not path.exists():
            raise RecordFormatError(f"Generator file not found: {path}")
        return cls.parse(path.read_text())

    def to_text(self) -> str:
        return "\n".join(g.label for g in self.generators) + "\n"

    @property
    def n_qubits(self) -> int:
        return self.generators[0].n_qubits

    @cached_property
    def symplectic_matrix(self) -> np.ndarray:
        """N x 2N matrix, row i = (x | z) of generator i."""
        return np.vstack([g.symplectic for g in self.generators])

    @cached_property
    def echelon(self) -> RowEchelon:
        return gf2_rref(self.symplectic_matrix)

    @property
    def labels(self) -> List[str]:
        return [g.label for g in self.generators]

    def product_of(self, coefficients: np.ndarray) -> PauliString:
        """Signed group element ∏ g_i^c_i."""
        out = PauliString.identity(self.n_qubits)
        for i in np.nonzero(np.asarray(coefficients) & 1)[0]:
            out = out.compose(self.generators[int(i)])
        return out

    def __repr__(self) -> str:
        return f"StabilizerTableau([{', '.join(self.labels)}])"


def graph_state_tableau(graph: GraphSpec) -> StabilizerTableau:
    """
    Generators X_v ∏_{v'~v} Z_v' of the graph state on ``graph``.

    Example:
        >>> graph_state_tableau(GraphSpec.path(3)).labels
        ['+XZI', '+ZXZ', '+IZX']
    """
    n = graph.n_vertices
    gens = []
    for v in graph.vertices:
        letters = {u: "Z" for u in graph.neighbors(v)}
        letters[v] = "X"
        gens.append(PauliString.from_letters(n, letters))
    return StabilizerTableau(tuple(gens))


def pauli_expectation(tableau: StabilizerTableau, pauli: PauliString) -> int:
    """
    Exact ⟨P⟩ on the stabilizer state: ±1 if ±P is in the group, else 0.
    """
    if pauli.n_qubits != tableau.n_qubits:
        raise DimensionError(
            f"Pauli string on {pauli.n_qubits} qubits, tableau on {tableau.n_qubits}"
        )
    if pauli.is_identity:
        return pauli.sign
    if any(anticommutes(g, pauli) for g in tableau.generators):
        return 0

    coefficients = gf2_solve_left(tableau.echelon, pauli.symplectic)
    if coefficients is None:
        return 0
    member = tableau.product_of(coefficients)
    return member.sign * pauli.sign


def group_elements(tableau: StabilizerTableau) -> Iterator[PauliString]:
    """All 2^N signed group elements, in Gray-code order starting from the identity."""
    current = PauliString.identity(tableau.n_qubits)
    yield current
    for step in range(1, 1 << tableau.n_qubits):
        flip = (step & -step).bit_length() - 1
        current = current.compose(tableau.generators[flip])
        yield current


def fidelity_with_stabilizer_state(
    tableau: StabilizerTableau,
    expectation_oracle: Callable[[PauliString], float],
    max_qubits: int = GROUP_ENUMERATION_MAX_QUBITS
) -> float:
    """
    F = 2^-N Σ_{P ∈ S} oracle(P), summing over the full stabilizer group.

    Raises:
        CapabilityError: N > max_qubits
    """
    n = tableau.n_qubits
    if n > max_qubits:
        raise CapabilityError(
            f"Group enumeration needs 2^{n} terms; cap is N <= {max_qubits}"
        )
    total = sum(float(expectation_oracle(p)) for p in group_elements(tableau))
    return total / (1 << n)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def _single_qubit_member(tableau: StabilizerTableau, qubit: int) -> Optional[PauliString]:
    for letter in "XYZ":
        candidate = PauliString.from_letters(tableau.n_qubits, {qubit: letter})
        value = pauli_expectation(tableau, candidate)
        if value:
            return candidate if value > 0 else candidate.negated()
    return None


def is_product_state(tableau: StabilizerTableau) -> bool:
    """Every qubit carries a weight-1 element of the group."""
    return all(_single_qubit_member(tableau, q) is not None for q in range(1, tableau.n_qubits + 1))


def is_css_state(tableau: StabilizerTableau) -> bool:
    """
    The group is generated by X-type and Z-type elements.

    The Z-type subgroup has dimension N - rank(Gx) and the X-type subgroup
    N - rank(Gz); CSS iff the two dimensions add up to N.
    """
    n = tableau.n_qubits
    gx = tableau.symplectic_matrix[:, :n]
    gz = tableau.symplectic_matrix[:, n:]
    return gf2_rank(gx) + gf2_rank(gz) == n


def css_generators(tableau: StabilizerTableau) -> Tuple[List[PauliString], List[PauliString]]:
    """
    Re-mix the generators into X-only and Z-only elements.

    Returns:
        (x_type, z_type) generator lists

    Raises:
        NotCertifiableError: the group is not CSS
    """
    if not is_css_state(tableau):
        raise NotCertifiableError("Stabilizer group has no all-X/all-Z generating set")
    n = tableau.n_qubits
    gx = tableau.symplectic_matrix[:, :n]
    gz = tableau.symplectic_matrix[:, n:]
    x_type = [tableau.product_of(c) for c in gf2_left_nullspace(gz)]
    z_type = [tableau.product_of(c) for c in gf2_left_nullspace(gx)]
    return x_type, z_type


def product_bloch_vectors(tableau: StabilizerTableau) -> np.ndarray:
    """
    Per-qubit Bloch vectors (N x 3) of a product stabilizer state.

    Raises:
        NotCertifiableError: some qubit has no weight-1 stabilizer
    """
    axis_index = {"X": 0, "Y": 1, "Z": 2}
    vectors = np.zeros((tableau.n_qubits, 3))
    for q in range(1, tableau.n_qubits + 1):
        member = _single_qubit_member(tableau, q)
        if member is None:
            raise NotCertifiableError(f"Qubit {q} is entangled with the rest", vertex=q)
        vectors[q - 1, axis_index[member.letter(q)]] = member.sign
    return vectors


def matches_graph_state(tableau: StabilizerTableau, graph: GraphSpec) -> bool:
    """True iff every graph-state generator of ``graph`` stabilizes the tableau's state."""
    if graph.n_vertices != tableau.n_qubits:
        return False
    return all(
        pauli_expectation(tableau, g) == 1 for g in graph_state_tableau(graph).generators
    )


def classify(tableau: StabilizerTableau, graph: Optional[GraphSpec] = None) -> StateClass:
    """
    Structural class of a stabilizer state.

    Product, then CSS, then BipartiteEvenDegreeGraph (only with an explicit
    graph), else GeneralStabilizer.
    """
    if is_product_state(tableau):
        return StateClass.PRODUCT
    if is_css_state(tableau):
        return StateClass.CSS
    if graph is not None:
        if not matches_graph_state(tableau, graph):
            logger.warning(f"Tableau is not the graph state of {graph!r}; graph ignored")
        else:
            try:
                even_degree_bipartition(graph)
                return StateClass.BIPARTITE_EVEN_DEGREE_GRAPH
            except NotCertifiableError as e:
                logger.debug(f"Graph outside the even-degree family: {e}")
    return StateClass.GENERAL_STABILIZER


# ---------------------------------------------------------------------------
# Random states and dense vectors
# ---------------------------------------------------------------------------

def _symplectic_dual(row: np.ndarray) -> np.ndarray:
    n = row.size // 2
    return np.concatenate([row[n:], row[:n]])


def random_stabilizer_tableau(n_qubits: int, rng: np.random.Generator) -> StabilizerTableau:
    """
    Uniformly random N-qubit stabilizer state.

    Generators are drawn one at a time, uniformly among Pauli strings that commute
    with the ones already chosen and lie outside their span, with uniform random
    signs. The number of candidates at each step does not depend on earlier
    choices, so every stabilizer group is equally likely.
    """
    if n_qubits < 1:
        raise ArgumentError(f"N must be positive, got {n_qubits}")
    n = n_qubits
    rows: List[np.ndarray] = []

    while len(rows) < n:
        if rows:
            constraints = np.vstack([_symplectic_dual(r) for r in rows])
            solutions = gf2_left_nullspace(constraints.T)
        else:
            solutions = np.eye(2 * n, dtype=np.uint8)

        coeffs = rng.integers(0, 2, size=solutions.shape[0], dtype=np.uint8)
        candidate = (coeffs.astype(np.int64) @ solutions.astype(np.int64)) & 1
        candidate = candidate.astype(np.uint8)
        if not candidate.any():
            continue
        if rows and gf2_rank(np.vstack(rows + [candidate])) == len(rows):
            continue
        rows.append(candidate)

    gens = tuple(
        PauliString(r[:n], r[n:], int(rng.choice((1, -1)))) for r in rows
    )
    return StabilizerTableau(gens)


def stabilizer_state_vector(tableau: StabilizerTableau, max_qubits: int = 24) -> np.ndarray:
    """
    Dense +1 eigenvector, from ∏(1 + g)/2 applied to the first basis state it does not annihilate.

    The global phase is fixed so the largest-magnitude amplitude is real positive.
    """
    n = tableau.n_qubits
    if n > max_qubits:
        raise CapabilityError(f"Dense vector for N={n} exceeds cap {max_qubits}")

    dim = 1 << n
    for k in range(dim):
        psi = np.zeros(dim, dtype=complex)
        psi[k] = 1.0
        for g in tableau.generators:
            psi = 0.5 * (psi + g.apply(psi))
        norm = np.linalg.norm(psi)
        if norm > 1e-6:
            psi /= norm
            anchor = psi[np.argmax(np.abs(psi))]
            return psi * (abs(anchor) / anchor)
    raise ArithmeticError("Projector product annihilated every basis state")
