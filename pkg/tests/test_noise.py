"""
Test the noise channels used to manufacture states of known fidelity
"""
import math

import numpy as np
import pytest

from src.operators.pauli import PauliString
from src.states.graphs import GraphSpec
from src.states.noise import (
    Depolarizing,
    ReplaceWithOrthogonal,
    SingleQubitZRotation,
    apply_noise,
    parse_noise_model,
)
from src.states.statevector import expectation, fidelity, prepare_graph_state
from src.utils.errors import ArgumentError


@pytest.fixture
def target():
    return prepare_graph_state(GraphSpec.path(3))


@pytest.mark.parametrize("p", [0.0, 0.05, 0.3, 1.0])
def test_replace_with_orthogonal_sets_fidelity(target, p):
    noisy = apply_noise(target, ReplaceWithOrthogonal(p), seed=1)
    assert fidelity(noisy, target) == pytest.approx(1.0 - p, abs=1e-12)


@pytest.mark.parametrize("p", [0.1, 0.5])
def test_depolarizing_fidelity(target, p):
    noisy = apply_noise(target, Depolarizing(p), seed=1)
    assert fidelity(noisy, target) == pytest.approx(1.0 - p + p / 8, abs=1e-12)
    # stabilizer expectations shrink by exactly 1 - p
    for g in ("XZI", "ZXZ", "IZX"):
        assert expectation(noisy, PauliString.from_label(g)) == pytest.approx(1.0 - p, abs=1e-12)


def test_z_rotation_flips_a_stabilizer(target):
    noisy = apply_noise(target, SingleQubitZRotation(2, math.pi), seed=0)
    assert expectation(noisy, PauliString.from_label("ZXZ")) == pytest.approx(-1.0)
    assert expectation(noisy, PauliString.from_label("XZI")) == pytest.approx(1.0)
    assert fidelity(noisy, target) == pytest.approx(0.0, abs=1e-12)


def test_noise_is_seeded(target):
    a = apply_noise(target, ReplaceWithOrthogonal(0.5), seed=9)
    b = apply_noise(target, ReplaceWithOrthogonal(0.5), seed=9)
    assert np.allclose(a.states[1].amplitudes, b.states[1].amplitudes)


@pytest.mark.parametrize(
    "spec, expected",
    [
        ("depolarizing:0.1", Depolarizing(0.1)),
        ("zrot:2:0.05", SingleQubitZRotation(2, 0.05)),
        ("orthogonal:0.3", ReplaceWithOrthogonal(0.3)),
    ],
)
def test_parse_noise_model(spec, expected):
    assert parse_noise_model(spec) == expected


@pytest.mark.parametrize("spec", ["bitflip:0.1", "depolarizing", "orthogonal:x", "orthogonal:1.5"])
def test_parse_noise_model_rejects(spec):
    with pytest.raises(ArgumentError):
        parse_noise_model(spec)
