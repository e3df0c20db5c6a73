"""
Shared pytest fixtures for the speedlimitpy test suite.

Provides a seeded generator, synthesized gates and spec files on disk for
the CLI tests. Random model builders live in tests/helpers.py.
"""

import math

import numpy as np
import pytest

from speedlimitpy import GateSpec, HamiltonianSpec, synthesize_gate


@pytest.fixture
def rng():
    """A seeded numpy generator."""
    return np.random.default_rng(20240611)


@pytest.fixture
def not_gate():
    """The synthesized phase-free NOT gate at unit energy."""
    return synthesize_gate(GateSpec(theta=0.0, energy=1.0))


@pytest.fixture
def half_pi_gate():
    """The synthesized theta = pi/2 gate at unit energy."""
    return synthesize_gate(GateSpec(theta=math.pi / 2, energy=1.0))


@pytest.fixture
def not_gate_spec_file(tmp_path, not_gate):
    """The theta = 0 gate written as a Hamiltonian spec JSON file."""
    path = tmp_path / "not_gate.json"
    HamiltonianSpec.from_model(not_gate.params, not_gate.timed_pulse()).write(path)
    return path
