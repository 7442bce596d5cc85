"""
Test certification of the even-N path graph state under the stabilizer promise
"""
import pytest

from src.promise.conditions import (
    PromiseVerdict,
    certify_under_promise,
    check_promise_size,
    evaluate_conditions,
    triple_terms,
)
from src.promise.diagrams import classify_assignments, diagram_lines, witness_tableau
from src.states.graphs import GraphSpec
from src.states.stabilizer import (
    StabilizerTableau,
    graph_state_tableau,
    pauli_expectation,
    random_stabilizer_tableau,
)
from src.utils.errors import ArgumentError


def _is_path_graph_state(tableau):
    target = graph_state_tableau(GraphSpec.path(tableau.n_qubits))
    return all(pauli_expectation(tableau, g) == 1 for g in target.generators)


@pytest.mark.parametrize("n_qubits", [4, 6, 8, 10])
def test_graph_state_satisfies_every_condition(n_qubits):
    tableau = graph_state_tableau(GraphSpec.path(n_qubits))
    conditions = evaluate_conditions(tableau)
    assert conditions.satisfied
    assert conditions.c1 == conditions.c2 == 1
    assert conditions.c3 == [1] * (n_qubits - 2)
    assert conditions.c4 == [0] * (n_qubits - 3)
    assert certify_under_promise(tableau) == PromiseVerdict.IS_TARGET


@pytest.mark.parametrize("n_qubits", [2, 3, 5, 7])
def test_promise_needs_even_chain(n_qubits):
    with pytest.raises(ArgumentError):
        check_promise_size(n_qubits)
    with pytest.raises(ArgumentError):
        classify_assignments(n_qubits)


def test_triple_terms_place_one_x():
    assert [p.label for p in triple_terms(4, 2)] == ["+XZZI", "+ZXZI", "+ZZXI"]


def test_sign_flip_is_rejected():
    labels = graph_state_tableau(GraphSpec.path(4)).labels
    labels[1] = "-" + labels[1][1:]
    tableau = StabilizerTableau.from_labels(labels)
    assert certify_under_promise(tableau) == PromiseVerdict.IS_NOT
    assert "c3[2]" in evaluate_conditions(tableau).violations()


def test_four_qubit_diagrams():
    diagrams = classify_assignments(4)
    assert [d.code for d in diagrams] == ["a A C b", "a B B b"]
    assert [d.is_graph_state for d in diagrams] == [False, True]
    assert len(diagram_lines(4)) == 4

    stray, graph = diagrams
    assert stray.forced_separations() == [1]
    assert graph.forced_separations() == []
    assert stray.to_dict()["strings"] == ["+XZII", "+XZZI", "+IZZX", "+IIZX"]


def test_four_qubit_witness():
    stray, graph = classify_assignments(4)
    witness = witness_tableau(stray)
    assert witness.labels == ["+XZII", "+XZZI", "+IZZX", "+IIZX"]
    conditions = evaluate_conditions(witness)
    assert conditions.c4[0] == 1
    assert conditions.violations() == ["c4[1]"]
    assert certify_under_promise(witness) == PromiseVerdict.IS_NOT

    assert certify_under_promise(witness_tableau(graph)) == PromiseVerdict.IS_TARGET


@pytest.mark.parametrize("n_qubits, count", [(4, 2), (6, 2), (8, 3), (10, 2)])
def test_diagram_counts(n_qubits, count):
    diagrams = classify_assignments(n_qubits)
    assert len(diagrams) == count
    assert sum(d.is_graph_state for d in diagrams) == 1


@pytest.mark.parametrize("n_qubits", [4, 6])
def test_random_stabilizer_states_are_never_accepted_falsely(n_qubits, rng):
    for _ in range(300):
        tableau = random_stabilizer_tableau(n_qubits, rng)
        if certify_under_promise(tableau) == PromiseVerdict.IS_TARGET:
            assert _is_path_graph_state(tableau)


@pytest.mark.slow
def test_random_stabilizer_states_at_scale(rng):
    for _ in range(10_000):
        tableau = random_stabilizer_tableau(4, rng)
        if certify_under_promise(tableau) == PromiseVerdict.IS_TARGET:
            assert _is_path_graph_state(tableau)
