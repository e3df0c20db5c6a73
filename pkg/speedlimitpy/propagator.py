# speedlimitpy/propagator.py
"""Exact time evolution of the driven qubit and an independent RK4 oracle.

Because ``H(t) = f(t) * H0`` commutes with itself at all times, the
propagator is ``U = exp(-i K F)`` where ``F`` is the accumulated action of the
pulse and ``K`` is :meth:`HamiltonianParams.coefficient_matrix`. This module
evaluates that exponential in closed form (no general matrix exponential),
integrates the same Schrodinger system with fixed-step fourth-order
Runge-Kutta as a cross-check, and computes the time-averaged energy.

All amplitudes are coefficient pairs ``(a1, a2)`` over the fixed basis of
:mod:`speedlimitpy.qubitstate`; column ``i`` of a :class:`Unitary2` is the
evolved image of basis state ``i``. Global phase is never discarded.

Example:
    The phase-free NOT at unit energy::

        params = HamiltonianParams(1.0, 1.0, 1.0, math.pi)
        U = closed_form_propagator(params, math.pi / 2)
        U.apply(QubitState.basis(1))        # QubitState(a1=0, a2=1)
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import DomainExceededError, NonPositiveDurationError
from .hamiltonian import HamiltonianParams, require_valid
from .pulse import PulseProfile
from .qubitstate import QubitState

logger = logging.getLogger(__name__)

# ── Constants ────────────────────────────────────────────────────── #

#: Below ``DEGENERATE_E12_RTOL * max(e11, e22, 1)`` the off-diagonal is treated as zero.
DEGENERATE_E12_RTOL = 1e-14

#: Largest acceptable unitarity defect of a closed-form propagator.
UNITARITY_TOLERANCE = 1e-10

#: Relative disagreement between the two energy averages that triggers a warning.
ENERGY_CROSSCHECK_RTOL = 1e-9


@dataclass(frozen=True)
class Unitary2:
    """A 2x2 complex propagator acting on coefficient pairs.

    ``[[u11, u12], [u21, u22]]`` maps ``(a1, a2)`` to
    ``(u11*a1 + u12*a2, u21*a1 + u22*a2)``.

    Attributes:
        u11, u12, u21, u22 (complex): Matrix entries.
        defect (float): Largest entry magnitude of ``U^dagger U - I``,
            computed on construction.
    """

    u11: complex
    u12: complex
    u21: complex
    u22: complex
    defect: float = field(init=False, compare=False)

    def __post_init__(self) -> None:
        for name in ("u11", "u12", "u21", "u22"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, "defect", unitarity_defect(self))

    @classmethod
    def identity(cls) -> "Unitary2":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_array(cls, matrix) -> "Unitary2":
        """Build from any 2x2 array-like."""
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    def as_array(self) -> np.ndarray:
        return np.array([[self.u11, self.u12], [self.u21, self.u22]], dtype=complex)

    @property
    def det(self) -> complex:
        return self.u11 * self.u22 - self.u12 * self.u21

    def apply(self, state: QubitState) -> QubitState:
        """Return ``U`` applied to *state*."""
        return QubitState(
            self.u11 * state.a1 + self.u12 * state.a2,
            self.u21 * state.a1 + self.u22 * state.a2,
        )

    def __matmul__(self, other: "Unitary2") -> "Unitary2":
        if not isinstance(other, Unitary2):
            return NotImplemented
        return Unitary2(
            self.u11 * other.u11 + self.u12 * other.u21,
            self.u11 * other.u12 + self.u12 * other.u22,
            self.u21 * other.u11 + self.u22 * other.u21,
            self.u21 * other.u12 + self.u22 * other.u22,
        )


@dataclass(frozen=True)
class EvolutionRecord:
    """Trajectory of a state under one drive.

    Attributes:
        times (tuple[float, ...]): Sample times.
        states (tuple[QubitState, ...]): Closed-form states at each time.
        actions (tuple[float, ...]): Accumulated action ``F(t)``.
        energies (tuple[float, ...]): ``<psi(t)|H0|psi(t)>``; constant up to
            rounding because ``H0`` is conserved.
        oracle_states (tuple[QubitState, ...] | None): RK4 states, when requested.
        max_oracle_deviation (float | None): Largest component difference
            between the closed-form and RK4 states, when requested.
    """

    times: tuple[float, ...]
    states: tuple[QubitState, ...]
    actions: tuple[float, ...]
    energies: tuple[float, ...]
    oracle_states: tuple[QubitState, ...] | None = None
    max_oracle_deviation: float | None = None

    @property
    def energy_drift(self) -> float:
        """Spread ``max - min`` of the recorded energies."""
        if not self.energies:
            return 0.0
        return max(self.energies) - min(self.energies)


def unitarity_defect(U: Unitary2) -> float:
    """Return the largest entry magnitude of ``U^dagger U - I``.

    Example::

        unitarity_defect(Unitary2(1, 0, 0, 0.5))   # 0.75
    """
    m = np.array([[U.u11, U.u12], [U.u21, U.u22]], dtype=complex)
    gram = m.conj().T @ m - np.eye(2)
    return float(np.max(np.abs(gram)))


def closed_form_propagator(params: HamiltonianParams, F: float) -> Unitary2:
    """Return ``exp(-i K F)`` in closed form.

    The spectral weights are written so that no branch loses precision:
    with ``d = e11 - e22`` and ``r = sqrt(d**2 + 4 e12**2)``, the larger
    eigenvalue carries weight ``(r - d) / 2r`` on ``a1`` and the off-diagonal
    entries are ``e^{-+i phi} (e12 / r) (x1 - x2)`` where ``x_j = e^{-i E_j F}``.
    When ``e12`` is negligible the decoupled diagonal solution
    ``diag(e^{-i e22 F}, e^{-i e11 F})`` is used instead.

    Args:
        params: Static Hamiltonian.
        F: Accumulated action, ``F >= 0``.

    Raises:
        InvalidParamsError: If *params* fail validation.
        DomainExceededError: If *F* is negative or not finite.
    """
    require_valid(params)
    if not (math.isfinite(F) and F >= 0.0):
        raise DomainExceededError(f"accumulated action must be finite and >= 0, got {F!r}")
    if F == 0.0:
        return Unitary2.identity()

    e11, e22, e12 = params.e11, params.e22, params.e12
    if e12 < DEGENERATE_E12_RTOL * max(e11, e22, 1.0):
        return Unitary2(cmath.exp(-1j * e22 * F), 0.0, 0.0, cmath.exp(-1j * e11 * F))

    d = e11 - e22
    root = math.hypot(d, 2.0 * e12)
    if d <= 0.0:
        upper = (root - d) / (2.0 * root)
        lower = 2.0 * e12 * e12 / (root * (root - d))
    else:
        lower = (root + d) / (2.0 * root)
        upper = 2.0 * e12 * e12 / (root * (root + d))

    e1 = 0.5 * (params.trace + root)
    e2 = max(params.determinant / e1, 0.0)
    x1 = cmath.exp(-1j * e1 * F)
    x2 = cmath.exp(-1j * e2 * F)
    off = (e12 / root) * (x1 - x2)
    phase = cmath.exp(1j * params.phi)

    U = Unitary2(
        upper * x1 + lower * x2,
        phase.conjugate() * off,
        phase * off,
        lower * x1 + upper * x2,
    )
    if U.defect > UNITARITY_TOLERANCE:
        logger.warning("closed-form propagator defect %.3g for %s, F=%r", U.defect, params, F)
    return U


def evolve_closed_form(
    params: HamiltonianParams, pulse: PulseProfile, t: float, psi0: QubitState
) -> QubitState:
    """Return ``psi(t)`` from the closed-form propagator at ``F(t)``.

    Raises:
        InvalidParamsError: If *params* fail validation.
        DomainExceededError: If *t* is outside the pulse domain.
        StateNormError: If *psi0* is not normalized.
    """
    require_valid(params)
    psi0.require_normalized()
    return closed_form_propagator(params, pulse.accumulated_action(t)).apply(psi0)


def evolve_ode_oracle(
    params: HamiltonianParams,
    pulse: PulseProfile,
    t: float,
    psi0: QubitState,
    steps: int,
) -> QubitState:
    """Integrate ``i da/dt = f(t) K a`` with classical fixed-step RK4.

    The *steps* budget is split over the smooth pieces of the pulse in
    proportion to their length, with at least one step per piece, so no
    step straddles a breakpoint. Doubling *steps* reduces the error against
    :func:`evolve_closed_form` about sixteen-fold in the asymptotic regime.

    Raises:
        InvalidParamsError: If *params* fail validation.
        DomainExceededError: If *t* is outside the pulse domain.
        StateNormError: If *psi0* is not normalized.
        ValueError: If *steps* is not a positive integer.
    """
    require_valid(params)
    psi0.require_normalized()
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps!r}")

    pieces = pulse.pieces(t)
    if not pieces:
        return psi0

    K = params.coefficient_matrix()
    k11, k12 = complex(K[0, 0]), complex(K[0, 1])
    k21, k22 = complex(K[1, 0]), complex(K[1, 1])
    total = sum(b - a for a, b, _ in pieces)
    a1, a2 = psi0.a1, psi0.a2

    for start, stop, index in pieces:
        n = max(1, round(steps * (stop - start) / total))
        h = (stop - start) / n
        # f at every half step of this piece
        fv = pulse.piece_values(index, start + 0.5 * h * np.arange(2 * n + 1)).tolist()
        for j in range(n):
            f0, fm, f1 = fv[2 * j], fv[2 * j + 1], fv[2 * j + 2]
            c = -1j * h
            p1 = c * f0 * (k11 * a1 + k12 * a2)
            q1 = c * f0 * (k21 * a1 + k22 * a2)
            b1, b2 = a1 + 0.5 * p1, a2 + 0.5 * q1
            p2 = c * fm * (k11 * b1 + k12 * b2)
            q2 = c * fm * (k21 * b1 + k22 * b2)
            b1, b2 = a1 + 0.5 * p2, a2 + 0.5 * q2
            p3 = c * fm * (k11 * b1 + k12 * b2)
            q3 = c * fm * (k21 * b1 + k22 * b2)
            b1, b2 = a1 + p3, a2 + q3
            p4 = c * f1 * (k11 * b1 + k12 * b2)
            q4 = c * f1 * (k21 * b1 + k22 * b2)
            a1 = a1 + (p1 + 2.0 * p2 + 2.0 * p3 + p4) / 6.0
            a2 = a2 + (q1 + 2.0 * q2 + 2.0 * q3 + q4) / 6.0
        logger.debug("rk4 piece [%g, %g]: %d steps", start, stop, n)

    return QubitState(a1, a2)


def average_energy(
    params: HamiltonianParams, pulse: PulseProfile, tau: float, psi0: QubitState
) -> float:
    """Return the time-averaged energy ``(1/tau) * integral of <psi|H(t)|psi>``.

    Since ``<H0>`` is conserved the average equals
    ``<psi0|H0|psi0> * F(tau) / tau``. That value is returned; the integral is
    also evaluated by quadrature over the closed-form trajectory and a
    warning is logged if the two disagree.

    Raises:
        NonPositiveDurationError: If *tau* is not strictly positive.
        InvalidParamsError: If *params* fail validation.
        DomainExceededError: If *tau* is outside the pulse domain.
        StateNormError: If *psi0* is not normalized.

    Example::

        average_energy(HamiltonianParams(1, 1, 0.5, math.pi),
                       PulseProfile.constant(1.0), math.pi, QubitState.basis(1))
        # 1.0
    """
    if not (math.isfinite(tau) and tau > 0.0):
        raise NonPositiveDurationError(f"tau must be > 0, got {tau!r}")
    require_valid(params)
    psi0.require_normalized()

    action = pulse.accumulated_action(tau)
    closed = params.expectation(psi0) * action / tau

    def integrand(s: float) -> float:
        state = closed_form_propagator(params, pulse.accumulated_action(s)).apply(psi0)
        return pulse.value_at(s) * params.expectation(state)

    inner = [k for k in pulse.knots if 0.0 < k < tau]
    quadrature, _ = integrate.quad(
        integrand, 0.0, tau, points=inner or None, limit=max(50, 2 * len(inner) + 2)
    )
    quadrature /= tau
    if abs(quadrature - closed) > ENERGY_CROSSCHECK_RTOL * max(1.0, abs(closed)):
        logger.warning(
            "average energy mismatch: closed form %.17g vs quadrature %.17g",
            closed,
            quadrature,
        )
    return closed


def trajectory(
    params: HamiltonianParams,
    pulse: PulseProfile,
    times: Sequence[float],
    psi0: QubitState,
    oracle_steps: int | None = None,
) -> EvolutionRecord:
    """Evolve *psi0* to every time in *times*.

    Args:
        params: Static Hamiltonian.
        pulse: Pulse profile; every time must lie in its domain.
        times: Sample times.
        psi0: Normalized initial state.
        oracle_steps: If given, also integrate to each time with
            :func:`evolve_ode_oracle` using this many steps.

    Returns:
        EvolutionRecord: The sampled trajectory.
    """
    require_valid(params)
    psi0.require_normalized()
    times = tuple(float(t) for t in times)
    actions = tuple(pulse.accumulated_action(t) for t in times)
    states = tuple(closed_form_propagator(params, F).apply(psi0) for F in actions)
    energies = tuple(params.expectation(s) for s in states)

    oracle_states = None
    deviation = None
    if oracle_steps is not None:
        oracle_states = tuple(
            evolve_ode_oracle(params, pulse, t, psi0, oracle_steps) for t in times
        )
        deviation = max(
            (s.max_deviation(o) for s, o in zip(states, oracle_states)), default=0.0
        )
        logger.info("oracle max deviation %.3g over %d times", deviation, len(times))

    return EvolutionRecord(times, states, actions, energies, oracle_states, deviation)
