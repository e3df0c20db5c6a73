"""
Random model builders shared by property tests.
"""

import math

import numpy as np

from speedlimitpy import HamiltonianParams, PulseProfile, QubitState


def random_params(rng):
    """An accepted Hamiltonian drawn over the whole constraint set."""
    e11, e22 = rng.uniform(0.0, 2.0, size=2)
    e12 = rng.uniform(0.0, 1.0) * math.sqrt(e11 * e22)
    return HamiltonianParams(e11, e22, e12, rng.uniform(0.0, 2.0 * math.pi))


def random_pulse(rng, end=10.0):
    """One of the three pulse shapes on [0, end]."""
    kind = rng.integers(3)
    if kind == 0:
        return PulseProfile.constant(rng.uniform(0.2, 2.0), end)
    inner = np.sort(rng.uniform(0.5, end - 0.5, size=int(rng.integers(1, 5))))
    knots = [0.0]
    for k in inner.tolist():
        if k - knots[-1] > 1e-3:
            knots.append(k)
    knots.append(end)
    if kind == 1:
        return PulseProfile.piecewise(knots, rng.uniform(0.2, 2.0, size=len(knots) - 1).tolist())
    return PulseProfile.sampled(knots, rng.uniform(0.2, 2.0, size=len(knots)).tolist())


def random_state(rng):
    """A normalized random state."""
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    z /= np.linalg.norm(z)
    return QubitState(complex(z[0]), complex(z[1]))
