"""
Test stabilizer tableaus against dense statevectors
"""
import itertools

import numpy as np
import pytest

from src.operators.binary import gf2_rank
from src.operators.pauli import PauliString
from src.states.graphs import GraphSpec
from src.states.noise import ReplaceWithOrthogonal, apply_noise
from src.states.stabilizer import (
    StabilizerTableau,
    StateClass,
    classify,
    css_generators,
    fidelity_with_stabilizer_state,
    graph_state_tableau,
    group_elements,
    is_css_state,
    is_product_state,
    pauli_expectation,
    product_bloch_vectors,
    random_stabilizer_tableau,
    stabilizer_state_vector,
)
from src.states.statevector import StateVector, expectation, prepare_graph_state
from src.utils.errors import ArgumentError, NotCertifiableError, RecordFormatError


def all_paulis(n_qubits):
    for letters in itertools.product("IXYZ", repeat=n_qubits):
        yield PauliString.from_label("".join(letters))


def test_graph_state_tableau_labels():
    assert graph_state_tableau(GraphSpec.path(3)).labels == ["+XZI", "+ZXZ", "+IZX"]


@pytest.mark.parametrize("graph", [GraphSpec.path(3), GraphSpec.cycle(4), GraphSpec.complete(3)])
def test_exact_expectations_match_dense_graph_state(graph):
    tableau = graph_state_tableau(graph)
    psi = prepare_graph_state(graph).amplitudes
    for p in all_paulis(graph.n_vertices):
        assert pauli_expectation(tableau, p) == pytest.approx(p.expectation(psi), abs=1e-10)


@pytest.mark.parametrize("n_qubits", [1, 2, 3, 4])
def test_random_tableau_matches_dense_vector(n_qubits, rng):
    for _ in range(5):
        tableau = random_stabilizer_tableau(n_qubits, rng)
        psi = stabilizer_state_vector(tableau)
        for g in tableau.generators:
            assert np.allclose(g.apply(psi), psi)
        for p in all_paulis(n_qubits):
            assert pauli_expectation(tableau, p) == pytest.approx(p.expectation(psi), abs=1e-10)


def random_pauli(n_qubits, rng):
    sign = "+" if rng.random() < 0.5 else "-"
    return PauliString.from_label(sign + "".join(rng.choice(list("IXYZ"), size=n_qubits)))


def random_member(tableau, rng):
    """Signed group element, possibly negated."""
    coefficients = rng.integers(0, 2, size=tableau.n_qubits, dtype=np.uint8)
    member = tableau.product_of(coefficients)
    return member.negated() if rng.random() < 0.5 else member


def test_random_graph_pauli_pairs_match_dense_state(rng):
    checked = nonzero = 0
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        graph = GraphSpec.random(n, 0.5, rng)
        tableau = graph_state_tableau(graph)
        psi = prepare_graph_state(graph).amplitudes
        p = random_member(tableau, rng) if rng.random() < 0.5 else random_pauli(n, rng)
        value = pauli_expectation(tableau, p)
        assert value == pytest.approx(p.expectation(psi), abs=1e-10)
        checked += 1
        nonzero += value != 0
    assert checked == 1000
    assert nonzero >= 400


@pytest.mark.parametrize("n_qubits", [5, 6, 7, 8])
def test_random_tableau_matches_dense_vector_on_random_paulis(n_qubits, rng):
    for _ in range(3):
        tableau = random_stabilizer_tableau(n_qubits, rng)
        psi = stabilizer_state_vector(tableau)
        for _ in range(50):
            p = random_member(tableau, rng) if rng.random() < 0.5 else random_pauli(n_qubits, rng)
            assert pauli_expectation(tableau, p) == pytest.approx(p.expectation(psi), abs=1e-10)


@pytest.mark.parametrize("n_qubits", [1, 2, 8, 16, 24])
def test_graph_state_tableau_has_full_rank(n_qubits, rng):
    for graph in (GraphSpec.path(n_qubits), GraphSpec.random(n_qubits, 0.3, rng)):
        tableau = graph_state_tableau(graph)
        assert len(tableau.generators) == n_qubits
        assert tableau.echelon.rank == n_qubits
        assert gf2_rank(tableau.symplectic_matrix) == n_qubits
        # the X block of a graph state is the identity
        assert np.array_equal(tableau.symplectic_matrix[:, :n_qubits], np.eye(n_qubits, dtype=np.uint8))


def test_group_elements_are_signed_stabilizers():
    tableau = StabilizerTableau.from_labels(["+XXX", "+ZZI", "-IZZ"])
    psi = stabilizer_state_vector(tableau)
    elements = list(group_elements(tableau))
    assert len(elements) == 8
    assert len(set(elements)) == 8
    for p in elements:
        assert p.expectation(psi) == pytest.approx(1.0)


def test_fidelity_from_group_sum():
    graph = GraphSpec.path(3)
    tableau = graph_state_tableau(graph)
    target = prepare_graph_state(graph)
    assert fidelity_with_stabilizer_state(tableau, lambda p: expectation(target, p)) == pytest.approx(1.0)

    noisy = apply_noise(target, ReplaceWithOrthogonal(0.3), seed=7)
    assert fidelity_with_stabilizer_state(tableau, lambda p: expectation(noisy, p)) == pytest.approx(0.7)


@pytest.mark.parametrize(
    "labels",
    [
        ["+XI", "+ZI"],          # anticommuting
        ["+XX", "+XX"],          # dependent
        ["+XX"],                 # too few
        ["+XI", "+IZZ"],         # sizes differ
    ],
)
def test_invalid_generator_sets(labels):
    with pytest.raises(ValueError):
        StabilizerTableau.from_labels(labels)


def test_text_format(tmp_path):
    text = "# Bell pair\n+XX\n+ZZ  # parity\n"
    tableau = StabilizerTableau.parse(text)
    assert tableau.labels == ["+XX", "+ZZ"]

    path = tmp_path / "bell.stab"
    path.write_text(tableau.to_text())
    assert StabilizerTableau.load(path).labels == tableau.labels

    for bad in ["", "+XQ\n+ZZ\n", "+XI\n+ZI\n"]:
        with pytest.raises(RecordFormatError):
            StabilizerTableau.parse(bad)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "labels, graph, expected",
    [
        (["+XI", "-IZ"], None, StateClass.PRODUCT),
        (["+XX", "+ZZ"], None, StateClass.CSS),
        (["+XXX", "+ZZI", "+IZZ"], None, StateClass.CSS),
        (["+XZI", "+ZXZ", "+IZX"], GraphSpec.path(3), StateClass.BIPARTITE_EVEN_DEGREE_GRAPH),
        (["+XZI", "+ZXZ", "+IZX"], None, StateClass.GENERAL_STABILIZER),
        (["+XZII", "+ZXZI", "+IZXZ", "+IIZX"], GraphSpec.path(4), StateClass.GENERAL_STABILIZER),
    ],
)
def test_classify(labels, graph, expected):
    assert classify(StabilizerTableau.from_labels(labels), graph) == expected


def test_classify_ignores_mismatched_graph():
    tableau = graph_state_tableau(GraphSpec.path(3))
    assert classify(tableau, GraphSpec.from_edges(3, [(1, 3), (2, 3)])) == StateClass.GENERAL_STABILIZER


def test_css_generators_split_by_type():
    tableau = StabilizerTableau.from_labels(["+XXX", "+ZZI", "+IZZ"])
    assert is_css_state(tableau)
    x_type, z_type = css_generators(tableau)
    assert [p.label for p in x_type] == ["+XXX"]
    assert len(z_type) == 2
    assert all(set(p.letters) <= {"Z", "I"} for p in z_type)
    assert all(pauli_expectation(tableau, p) == 1 for p in x_type + z_type)

    with pytest.raises(NotCertifiableError):
        css_generators(graph_state_tableau(GraphSpec.path(3)))


def remix(tableau, rng):
    """Same stabilizer group under a random invertible GF(2) change of generators."""
    n = tableau.n_qubits
    while True:
        mixing = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
        if gf2_rank(mixing) == n:
            return StabilizerTableau(tuple(tableau.product_of(row) for row in mixing))


def test_remixed_ghz_generators_stay_css():
    # +XXX·+ZZI = -YYX
    tableau = StabilizerTableau.from_labels(["-YYX", "+ZZI", "+IZZ"])
    assert is_css_state(tableau)
    assert classify(tableau) == StateClass.CSS
    x_type, _ = css_generators(tableau)
    assert [p.label for p in x_type] == ["+XXX"]


@pytest.mark.parametrize(
    "labels",
    [
        ["+XXX", "+ZZI", "+IZZ"],
        ["+XXXX", "+ZZII", "+IZZI", "+IIZZ"],
        ["+XXII", "+IIXX", "+ZZZZ", "-ZZII"],
        ["+XZI", "+ZXZ", "+IZX"],
        ["+XZII", "+ZXZI", "+IZXZ", "+IIZX"],
    ],
)
def test_css_classification_is_invariant_under_remixing(labels, rng):
    tableau = StabilizerTableau.from_labels(labels)
    expected = is_css_state(tableau)
    for _ in range(20):
        mixed = remix(tableau, rng)
        assert is_css_state(mixed) == expected
        assert classify(mixed) == classify(tableau)
        assert all(pauli_expectation(mixed, g) == 1 for g in tableau.generators)


def test_product_bloch_vectors():
    tableau = StabilizerTableau.from_labels(["+XI", "-IZ"])
    assert is_product_state(tableau)
    assert np.array_equal(product_bloch_vectors(tableau), [[1, 0, 0], [0, 0, -1]])

    bell = StabilizerTableau.from_labels(["+XX", "+ZZ"])
    assert not is_product_state(bell)
    with pytest.raises(NotCertifiableError) as info:
        product_bloch_vectors(bell)
    assert info.value.vertex == 1


def test_mixed_generators_recover_product_state():
    # +XZ and +ZX generate the two-qubit graph state
    tableau = StabilizerTableau.from_labels(["+XZ", "+ZX"])
    assert not is_product_state(tableau)
    # +XI and +XZ together contain +IZ
    tableau = StabilizerTableau.from_labels(["+XI", "+XZ"])
    assert is_product_state(tableau)
    assert np.array_equal(product_bloch_vectors(tableau), [[1, 0, 0], [0, 0, 1]])


def test_stabilizer_state_vector_is_normalised(rng):
    tableau = random_stabilizer_tableau(5, rng)
    state = StateVector(stabilizer_state_vector(tableau))
    assert state.n_qubits == 5


def test_random_tableau_rejects_zero_qubits(rng):
    with pytest.raises(ArgumentError):
        random_stabilizer_tableau(0, rng)
