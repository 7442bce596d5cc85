"""
Test estimators, bounds and the certification protocol
"""
import math

import numpy as np
import pytest

from src.certification.algorithm import (
    CertificationConfig,
    CertificationReport,
    RecordReplaySampler,
    Verdict,
    certify,
    decide_verdict,
    max_epsilon,
)
from src.certification.bounds import (
    certification_thresholds,
    corollary1_bounds,
    default_shot_count,
    fidelity_lower_bound,
    hoeffding_failure_bound,
    lemma2_fidelity_bounds,
    lemma2_group_element_bound,
    lemma3_symmetry_bound,
)
from src.certification.estimators import (
    THREE_BASIS_WEIGHTS,
    EstimatorPlan,
    VertexEstimator,
    build_estimator_plan,
    estimate_from_records,
    exact_estimates,
    per_shot_range,
    per_shot_terms,
    run_self_test,
)
from src.certification.monte_carlo import default_epsilon
from src.certification.operators import stabilizer_combinations
from src.operators.pauli import PauliString, anticommutes
from src.states.graphs import GraphSpec
from src.states.noise import ReplaceWithOrthogonal, SingleQubitZRotation, apply_noise
from src.states.stabilizer import graph_state_tableau, group_elements
from src.states.statevector import (
    EnsembleSampler,
    MixedStateEnsemble,
    expectation,
    fidelity,
    prepare_graph_state,
    random_ensemble,
    random_state,
    sample_uniform_measurement,
)
from src.utils.errors import ArgumentError, ConfigurationError, DimensionError, NotCertifiableError

STAR = GraphSpec.from_edges(5, [(1, 2), (1, 3), (1, 4), (1, 5)])


# ---------------------------------------------------------------------------
# Operators and estimator plans
# ---------------------------------------------------------------------------

def test_stabilizer_combinations_of_path():
    combos = stabilizer_combinations(GraphSpec.path(3))
    assert [c.label() for c in combos] == ["XZI + ZXI", "ZXZ + ZZX + XZZ", "IZX + IXZ"]
    assert [c.generator.label for c in combos] == ["+XZI", "+ZXZ", "+IZX"]

    with pytest.raises(NotCertifiableError):
        stabilizer_combinations(GraphSpec.path(4))


def test_three_basis_plan():
    plan = build_estimator_plan(GraphSpec.path(5))
    assert plan.schedule == "three-basis"
    assert plan.basis_labels == ["x", "xz_plus", "xz_minus"]
    assert plan.symmetry.qubits == (1, 3, 5)
    assert plan.boundary_constant == 1.0
    assert [v.weights for v in plan.vertices][:2] == [THREE_BASIS_WEIGHTS[2], THREE_BASIS_WEIGHTS[3]]
    assert per_shot_range(plan) == pytest.approx(1.0 + 2.0 * math.sqrt(2.0))


def test_theta_grid_plan_for_large_neighbourhoods():
    plan = build_estimator_plan(STAR)
    assert plan.schedule == "theta-grid"
    assert plan.basis_labels[0] == "x"
    assert plan.vertices[0].support == (1, 2, 3, 4, 5)


def test_self_test_rejects_bad_weights():
    plan = build_estimator_plan(GraphSpec.path(3))
    broken = VertexEstimator(plan.vertices[0].combination, (0.0, 1.0, 1.0))
    bad_plan = EstimatorPlan(plan.graph, plan.bases, (broken,) + plan.vertices[1:], plan.symmetry, plan.schedule)
    with pytest.raises(ConfigurationError):
        run_self_test(bad_plan)


@pytest.mark.parametrize("graph", [GraphSpec.path(5), GraphSpec.cycle(4), STAR])
def test_exact_estimates_equal_operator_expectations(graph, rng):
    plan = build_estimator_plan(graph)
    combos = stabilizer_combinations(graph)
    for rho in (random_state(graph.n_vertices, rng), random_ensemble(graph.n_vertices, rng)):
        estimates = exact_estimates(rho, plan)
        assert estimates.u_hat == pytest.approx(expectation(rho, plan.symmetry.pauli()), abs=1e-10)
        for m, combo in zip(estimates.m_hat, combos):
            assert m == pytest.approx(expectation(rho, list(combo.terms)), abs=1e-10)


def test_graph_state_estimates_are_one():
    graph = GraphSpec.path(5)
    estimates = exact_estimates(prepare_graph_state(graph), build_estimator_plan(graph))
    assert estimates.u_hat == pytest.approx(1.0)
    assert np.allclose(estimates.m_hat, 1.0)


def test_per_shot_terms_average_to_the_estimate(rng):
    graph = GraphSpec.path(3)
    plan = build_estimator_plan(graph)
    state = random_state(3, rng)
    records = [sample_uniform_measurement(state, b.direction, 2000, seed=j) for j, b in enumerate(plan.bases)]
    estimates = estimate_from_records(records, plan)
    for v in graph.vertices:
        terms = per_shot_terms(records, plan, v)
        assert terms.mean() == pytest.approx(estimates.m_hat[v - 1])
        assert np.abs(terms).max() <= per_shot_range(plan) + 1e-12


def test_estimates_are_unbiased_over_repeated_batches(rng):
    graph = GraphSpec.path(3)
    plan = build_estimator_plan(graph)
    rho = random_ensemble(3, rng)
    exact = exact_estimates(rho, plan)

    u_batches, m_batches = [], []
    for b in range(200):
        records = [
            sample_uniform_measurement(rho, basis.direction, 200, seed=1000 * b + j)
            for j, basis in enumerate(plan.bases)
        ]
        estimates = estimate_from_records(records, plan)
        u_batches.append(estimates.u_hat)
        m_batches.append(estimates.m_hat)

    m_batches = np.asarray(m_batches)
    assert np.mean(u_batches) == pytest.approx(exact.u_hat, abs=0.03)
    assert np.allclose(m_batches.mean(axis=0), exact.m_hat, atol=0.06)
    # single batches scatter around the mean
    assert m_batches.std(axis=0).min() > 0


def test_estimate_from_records_checks_alignment(rng):
    plan = build_estimator_plan(GraphSpec.path(3))
    state = random_state(3, rng)
    records = [sample_uniform_measurement(state, b.direction, 100, seed=1) for b in plan.bases]
    with pytest.raises(ArgumentError):
        estimate_from_records(records[::-1], plan)
    with pytest.raises(ArgumentError):
        estimate_from_records({"x": records[0]}, plan)
    short = sample_uniform_measurement(state, plan.bases[2].direction, 50, seed=1)
    with pytest.raises(ArgumentError):
        estimate_from_records(records[:2] + [short], plan)


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------

def test_default_shot_count():
    assert default_shot_count(0.01) == 31807
    assert default_shot_count(0.05) == math.ceil(32 * math.log(12) / (25 * 0.05 ** 2))
    with pytest.raises(ArgumentError):
        default_shot_count(0.0)


def test_thresholds():
    u, m = certification_thresholds(1e-4)
    assert u == pytest.approx(1 - 13e-4 / 4)
    assert m == pytest.approx(1 - 9e-2)


def near_target_ensemble(target, rng):
    """Random mixture of ``target`` with Haar-random states, weight on the target uniform in [0, 1]."""
    q = rng.random()
    others = random_ensemble(target.n_qubits, rng, members=int(rng.integers(1, 4)))
    weights = np.concatenate([[q], (1 - q) * np.asarray(others.weights)])
    return MixedStateEnsemble(weights, (target,) + others.states)


def random_pauli(n_qubits, rng):
    return PauliString.from_label("".join(rng.choice(list("IXYZ"), size=n_qubits)))


def test_corollary1_bound_holds_on_random_states(rng):
    graph = GraphSpec.path(3)
    target = prepare_graph_state(graph)
    symmetry = build_estimator_plan(graph).symmetry.pauli()
    checked = 0
    for trial in range(1000):
        rho = near_target_ensemble(target, rng) if trial % 2 else random_ensemble(3, rng)
        bound = corollary1_bounds(expectation(rho, symmetry))
        for _ in range(4):
            p = random_pauli(3, rng)
            if anticommutes(p, symmetry):
                assert abs(expectation(rho, p)) <= bound + 1e-12
                checked += 1
    assert checked > 1000
    assert corollary1_bounds(1.0) == 0.0
    assert corollary1_bounds(0.5) == pytest.approx(1.0)


@pytest.mark.parametrize("p", [0.0, 0.1, 0.4, 0.9])
def test_lemma2_relations(p):
    graph = GraphSpec.path(3)
    tableau = graph_state_tableau(graph)
    target = prepare_graph_state(graph)
    rho = apply_noise(target, ReplaceWithOrthogonal(p), seed=4)
    f = fidelity(rho, target)

    generator_values = [expectation(rho, g) for g in tableau.generators]
    assert lemma2_fidelity_bounds(expectations=generator_values) <= f + 1e-12

    floor = lemma2_fidelity_bounds(fidelity=f)
    assert floor == lemma2_group_element_bound(f)
    for element in group_elements(tableau):
        assert expectation(rho, element) >= floor - 1e-12

    with pytest.raises(ArgumentError):
        lemma2_fidelity_bounds()


def test_lemma3_symmetry_bound(rng):
    graph = GraphSpec.path(5)
    target = prepare_graph_state(graph)
    symmetry = build_estimator_plan(graph).symmetry.pauli()
    for trial in range(1000):
        rho = near_target_ensemble(target, rng) if trial % 2 else random_ensemble(5, rng)
        assert fidelity(rho, target) <= lemma3_symmetry_bound(expectation(rho, symmetry)) + 1e-12


def test_failure_bound_and_fidelity_floor():
    assert hoeffding_failure_bound(default_shot_count(0.01), 0.01, 3) < 1 / 3
    assert fidelity_lower_bound([1.0, 1.0, 1.0]) == 1.0
    assert fidelity_lower_bound([0.9, 0.9]) == pytest.approx(0.9)
    assert fidelity_lower_bound([-1.0, -1.0, -1.0]) == 0.0


# ---------------------------------------------------------------------------
# Protocol
# ---------------------------------------------------------------------------

def test_decide_verdict_ties():
    epsilon = 1e-4
    u_threshold, m_threshold = certification_thresholds(epsilon)
    assert decide_verdict(u_threshold, [1.0, 1.0], epsilon) == (Verdict.CERTIFIED, None)
    assert decide_verdict(np.nextafter(u_threshold, 0), [1.0], epsilon) == (Verdict.FAILED, "symmetry")
    assert decide_verdict(1.0, [1.0, m_threshold], epsilon) == (Verdict.FAILED, "stabilizers")
    assert decide_verdict(1.0, [np.nextafter(m_threshold, 2)], epsilon) == (Verdict.CERTIFIED, None)


@pytest.mark.parametrize("n_qubits", [3, 5, 7])
def test_epsilon_must_be_below_limit(n_qubits):
    graph = GraphSpec.path(n_qubits)
    limit = max_epsilon(n_qubits)
    assert limit == pytest.approx(1 / (64 * n_qubits ** 2))
    with pytest.raises(ConfigurationError):
        CertificationConfig(epsilon=limit, target=graph)
    with pytest.raises(ConfigurationError):
        CertificationConfig(epsilon=0.0, target=graph)
    with pytest.raises(ConfigurationError):
        CertificationConfig(epsilon=default_epsilon(n_qubits), target=graph, shots_per_basis=0)
    assert CertificationConfig(epsilon=default_epsilon(n_qubits), target=graph).shots == default_shot_count(
        default_epsilon(n_qubits)
    )


def _sampler(graph, noise=None, seed=0):
    rho = prepare_graph_state(graph)
    if noise is not None:
        rho = apply_noise(rho, noise, seed=seed)
    return EnsembleSampler(rho, mode="histogram")


def test_ideal_state_is_certified():
    graph = GraphSpec.path(5)
    report = certify(_sampler(graph), CertificationConfig(default_epsilon(5), graph, seed=1))
    assert report.verdict == Verdict.CERTIFIED
    assert report.certified
    assert report.u_hat == 1.0
    assert report.failed_step is None
    assert report.shots == default_shot_count(default_epsilon(5))
    assert report.bases == ["x", "xz_plus", "xz_minus"]


def test_flipped_stabilizer_fails():
    graph = GraphSpec.path(3)
    sampler = _sampler(graph, SingleQubitZRotation(2, math.pi))
    report = certify(sampler, CertificationConfig(default_epsilon(3), graph))
    assert report.verdict == Verdict.FAILED
    assert report.failed_step == "stabilizers"
    assert report.m_hat[1] < 0


def test_broken_symmetry_fails_first():
    graph = GraphSpec.path(3)
    sampler = _sampler(graph, SingleQubitZRotation(1, math.pi))
    report = certify(sampler, CertificationConfig(default_epsilon(3), graph))
    assert report.verdict == Verdict.FAILED
    assert report.failed_step == "symmetry"
    assert report.u_hat == pytest.approx(-1.0)


def test_certification_is_reproducible():
    graph = GraphSpec.path(3)
    config = CertificationConfig(default_epsilon(3), graph, seed=42)
    noise = ReplaceWithOrthogonal(0.02)
    first = certify(_sampler(graph, noise, seed=3), config)
    second = certify(_sampler(graph, noise, seed=3), config)
    assert first.to_dict() == second.to_dict()


def test_shot_override_is_reported():
    graph = GraphSpec.path(3)
    report = certify(_sampler(graph), CertificationConfig(default_epsilon(3), graph, shots_per_basis=1000))
    assert report.shots == 1000
    assert report.shots_overridden
    assert any("overridden" in note for note in report.notes)


def test_report_serialisation():
    graph = GraphSpec.path(3)
    report = certify(_sampler(graph), CertificationConfig(default_epsilon(3), graph))
    payload = report.to_dict()
    assert payload["verdict"] == "Certified"
    assert payload["T"] == report.shots
    assert set(payload["thresholds"]) == {"u", "m"}
    assert payload["graph"] == {"n": 3, "edges": [[1, 2], [2, 3]]}
    assert CertificationReport.from_dict(payload) == report


def test_sampler_size_must_match():
    with pytest.raises(DimensionError):
        certify(_sampler(GraphSpec.path(5)), CertificationConfig(default_epsilon(3), GraphSpec.path(3)))


def test_replayed_records_give_the_same_estimates():
    graph = GraphSpec.path(3)
    plan = build_estimator_plan(graph)
    state = apply_noise(prepare_graph_state(graph), ReplaceWithOrthogonal(0.01), seed=2)
    records = [sample_uniform_measurement(state, b.direction, 4000, seed=j) for j, b in enumerate(plan.bases)]
    replay = RecordReplaySampler(records)
    assert replay.shots == 4000

    report = certify(replay, CertificationConfig(default_epsilon(3), graph, shots_per_basis=4000))
    estimates = estimate_from_records(records, plan)
    assert report.u_hat == estimates.u_hat
    assert report.m_hat == list(estimates.m_hat)

    with pytest.raises(ArgumentError):
        certify(replay, CertificationConfig(default_epsilon(3), graph, shots_per_basis=10))
    with pytest.raises(ArgumentError):
        RecordReplaySampler([])
