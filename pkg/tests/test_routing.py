"""
Test routing of stabilizer targets to product, CSS and graph certification
"""
import math

import numpy as np
import pytest

from src.certification.algorithm import CertificationReport, Verdict
from src.certification.routing import (
    Route,
    StabilizerCertificationReport,
    certify_css_state,
    certify_product_state,
    certify_stabilizer_state,
    route_certification,
)
from src.states.graphs import GraphSpec
from src.states.noise import SingleQubitZRotation, apply_noise
from src.states.stabilizer import StabilizerTableau, graph_state_tableau, stabilizer_state_vector
from src.states.statevector import EnsembleSampler, StateVector
from src.utils.errors import ArgumentError, DimensionError, NotCertifiableError

PRODUCT = ["+XI", "-IZ"]
GHZ = ["+XXX", "+ZZI", "+IZZ"]


def _sampler(tableau, noise=None):
    state = StateVector(stabilizer_state_vector(tableau))
    rho = apply_noise(state, noise, seed=0) if noise is not None else state
    return EnsembleSampler(rho, mode="histogram")


@pytest.mark.parametrize(
    "labels, graph, route",
    [
        (PRODUCT, None, Route.PRODUCT),
        (GHZ, None, Route.CSS),
        (["+XZI", "+ZXZ", "+IZX"], GraphSpec.path(3), Route.GRAPH),
    ],
)
def test_route_certification(labels, graph, route):
    assert route_certification(StabilizerTableau.from_labels(labels), graph) == route


def test_general_stabilizer_has_no_route():
    with pytest.raises(NotCertifiableError):
        route_certification(graph_state_tableau(GraphSpec.path(4)), GraphSpec.path(4))


def test_product_route():
    tableau = StabilizerTableau.from_labels(PRODUCT)
    report = certify_stabilizer_state(_sampler(tableau), tableau, epsilon=0.05, seed=1)
    assert isinstance(report, StabilizerCertificationReport)
    assert report.route == Route.PRODUCT
    assert report.certified
    assert report.estimates == pytest.approx([1.0, 1.0])
    assert report.fidelity_estimate == pytest.approx(1.0)
    assert report.bases == ["x", "y", "z"]

    flipped = _sampler(tableau, SingleQubitZRotation(1, math.pi))
    report = certify_product_state(flipped, np.array([[1, 0, 0], [0, 0, -1]]), shots=500, seed=1)
    assert report.verdict == Verdict.FAILED
    assert report.estimates[0] == pytest.approx(0.0)


def test_css_route():
    tableau = StabilizerTableau.from_labels(GHZ)
    report = certify_stabilizer_state(_sampler(tableau), tableau, epsilon=0.05, seed=2)
    assert report.route == Route.CSS
    assert report.certified
    assert report.labels[0] == "+XXX"
    assert report.estimates == pytest.approx([1.0, 1.0, 1.0])
    assert report.fidelity_lower_bound == pytest.approx(1.0)

    flipped = _sampler(tableau, SingleQubitZRotation(1, math.pi))
    report = certify_css_state(flipped, tableau, shots=500, seed=2)
    assert report.verdict == Verdict.FAILED
    assert report.estimates[0] == pytest.approx(-1.0)
    assert report.fidelity_lower_bound == pytest.approx(0.0)


def test_graph_route_returns_certification_report():
    graph = GraphSpec.path(3)
    tableau = graph_state_tableau(graph)
    report = certify_stabilizer_state(_sampler(tableau), tableau, epsilon=1e-3, seed=3, shots=2000, graph=graph)
    assert isinstance(report, CertificationReport)
    assert report.certified
    assert report.shots == 2000


def test_report_dict():
    tableau = StabilizerTableau.from_labels(GHZ)
    payload = certify_css_state(_sampler(tableau), tableau, shots=100, seed=0).to_dict()
    assert payload["T"] == 100
    assert payload["route"] == "css"
    assert payload["verdict"] == "Certified"
    assert "shots" not in payload


def test_argument_checks():
    tableau = StabilizerTableau.from_labels(GHZ)
    with pytest.raises(ArgumentError):
        certify_css_state(_sampler(tableau), tableau, shots=0)
    with pytest.raises(ArgumentError):
        certify_css_state(_sampler(tableau), tableau, shots=10, epsilon=1.5)
    with pytest.raises(DimensionError):
        certify_css_state(_sampler(StabilizerTableau.from_labels(PRODUCT)), tableau, shots=10)
    with pytest.raises(DimensionError):
        certify_product_state(_sampler(tableau), np.zeros((2, 3)), shots=10)
