# speedlimitpy/synthesis.py
"""Minimum-time NOT gates with a phase shift.

The gate with phase shift ``theta`` swaps the two basis states and multiplies
each by ``e^{-i theta}``. It is realized at minimum time by a symmetric
Hamiltonian ``E11 = E22 = E`` driven with a constant pulse ``f = 1`` for
``tau = (pi/2) / E12``, with the off-diagonal chosen from one of two
branches:

* ``plus``  (``phi = pi``): ``E / E12 = 1 + 2 theta~ / pi``;
* ``minus`` (``phi = 0``):  ``E / E12 = 2 theta~ / pi - 1`` (or ``+ 3`` when
  ``theta~ < pi``), admissible only for ``theta >= pi``;

where ``theta~ = theta mod 2 pi``. The ``auto`` branch takes the smaller
ratio, which always equals the bound ``1 + 2 (theta mod pi) / pi``.
"""

from __future__ import annotations

import cmath
import json
import logging
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import BranchInadmissibleError, NonPositiveEnergyError
from .hamiltonian import HamiltonianParams
from .propagator import Unitary2, average_energy, closed_form_propagator
from .pulse import PulseProfile
from .qubitstate import QubitState
from .speedlimit import HALF_PI, gate_bound

logger = logging.getLogger(__name__)

# ── Constants ────────────────────────────────────────────────────── #

AUTO = "auto"
PLUS = "plus"
MINUS = "minus"

#: Branch names accepted by :class:`GateSpec`.
VALID_BRANCHES = {AUTO, PLUS, MINUS}

#: Default tolerance of :func:`verify_gate`.
DEFAULT_VERIFY_TOL = 1e-9

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class GateSpec:
    """Request for a minimum-time gate.

    Args:
        theta: Phase shift in radians, ``>= 0``.
        energy: Target average energy, ``> 0``.
        branch: One of :data:`VALID_BRANCHES`.

    Raises:
        NonPositiveEnergyError: If *energy* is not strictly positive.
        BranchInadmissibleError: If *branch* is ``"minus"`` and ``theta < pi``.
        ValueError: If *theta* is negative or *branch* is unknown.
    """

    theta: float
    energy: float = 1.0
    branch: str = AUTO

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and self.theta >= 0.0):
            raise ValueError(f"theta must be finite and >= 0, got {self.theta!r}")
        if not (math.isfinite(self.energy) and self.energy > 0.0):
            raise NonPositiveEnergyError(f"energy must be > 0, got {self.energy!r}")
        if self.branch not in VALID_BRANCHES:
            raise ValueError(
                f"branch must be one of {sorted(VALID_BRANCHES)}, got {self.branch!r}"
            )
        if self.branch == MINUS and self.theta < math.pi:
            raise BranchInadmissibleError(
                f"minus branch needs theta >= pi, got theta={self.theta!r}"
            )


@dataclass(frozen=True)
class SynthesizedGate:
    """A realized gate.

    Attributes:
        theta (float): Requested phase shift.
        branch (str): Branch actually used (``"plus"`` or ``"minus"``).
        params (HamiltonianParams): ``E11 = E22``, ``phi`` in ``{0, pi}``.
        pulse (PulseProfile): Open-ended ``f = 1``; :meth:`timed_pulse` cuts it
            at ``tau``.
        tau (float): Gate time.
        predicted_product (float): ``tau * E / (h/4)``, the branch ratio.
    """

    theta: float
    branch: str
    params: HamiltonianParams
    pulse: PulseProfile
    tau: float
    predicted_product: float

    def timed_pulse(self) -> PulseProfile:
        """``f = 1`` on ``[0, tau]``, the drive written to Hamiltonian spec files."""
        return PulseProfile.constant(1.0, self.tau)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of :func:`verify_gate`; :meth:`to_dict` gives the JSON fields."""

    theta: float
    tau: float
    energy: float
    product_normalized: float
    bound: float
    gate_error: float
    saturates: bool

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def branch_ratio(theta: float, branch: str) -> float:
    """Return ``E11 / E12`` for *branch* (``"plus"`` or ``"minus"``).

    Raises:
        BranchInadmissibleError: For ``"minus"`` with ``theta < pi``.
    """
    reduced = math.fmod(theta, TWO_PI)
    if branch == PLUS:
        return 1.0 + 2.0 * reduced / math.pi
    if branch == MINUS:
        if theta < math.pi:
            raise BranchInadmissibleError(
                f"minus branch needs theta >= pi, got theta={theta!r}"
            )
        if reduced >= math.pi:
            return 2.0 * reduced / math.pi - 1.0
        return 2.0 * reduced / math.pi + 3.0
    raise ValueError(f"branch must be {PLUS!r} or {MINUS!r}, got {branch!r}")


def select_branch(theta: float) -> str:
    """Branch with the smaller ratio; ties go to ``"minus"``."""
    if theta < math.pi:
        return PLUS
    return MINUS if branch_ratio(theta, MINUS) <= branch_ratio(theta, PLUS) else PLUS


def synthesize_gate(spec: GateSpec) -> SynthesizedGate:
    """Construct the minimum-time Hamiltonian and pulse for *spec*.

    Example::

        gate = synthesize_gate(GateSpec(theta=math.pi / 2))
        gate.params   # HamiltonianParams(e11=1.0, e22=1.0, e12=0.5, phi=pi)
        gate.tau      # pi
    """
    branch = select_branch(spec.theta) if spec.branch == AUTO else spec.branch
    ratio = branch_ratio(spec.theta, branch)
    e12 = spec.energy / ratio
    tau = HALF_PI / e12
    phi = math.pi if branch == PLUS else 0.0
    params = HamiltonianParams(spec.energy, spec.energy, e12, phi)
    logger.info(
        "synthesized theta=%g on %s branch: ratio %.17g, tau %.17g", spec.theta, branch, ratio, tau
    )
    return SynthesizedGate(
        theta=spec.theta,
        branch=branch,
        params=params,
        pulse=PulseProfile.constant(1.0),
        tau=tau,
        predicted_product=ratio,
    )


def gate_target(theta: float) -> Unitary2:
    """Return the target operator: ``a11 = a22 = 0``, ``a12 = a21 = e^{-i theta}``.

    A propagator equal to this target also maps every state
    ``a psi1 + b psi2`` with ``Re(a b*) = 0`` onto a state orthogonal to it;
    this two-parameter family is the set of unknown states the gate
    complements.
    """
    phase = cmath.exp(-1j * theta)
    return Unitary2(0.0, phase, phase, 0.0)


def gate_error(U: Unitary2, theta: float) -> float:
    """Frobenius norm of ``U - gate_target(theta)``; global phase included."""
    return float(np.linalg.norm(U.as_array() - gate_target(theta).as_array()))


def verify_gate(
    params: HamiltonianParams,
    pulse: PulseProfile,
    tau: float,
    theta: float,
    tol: float = DEFAULT_VERIFY_TOL,
) -> VerificationReport:
    """Check a candidate drive against the gate and the bound.

    The energy is the larger of the time-averaged energies of the two basis
    states. The run saturates the bound when the gate error is within *tol*
    and the normalized product matches the bound within *tol*.

    Raises:
        InvalidParamsError: If *params* fail validation.
        DomainExceededError: If *tau* is outside the pulse domain.
        NonPositiveDurationError: If *tau* is not strictly positive.
        ValueError: If *tol* is not strictly positive.
    """
    if not tol > 0.0:
        raise ValueError(f"tol must be > 0, got {tol!r}")
    error = gate_error(closed_form_propagator(params, pulse.accumulated_action(tau)), theta)
    energy = max(
        average_energy(params, pulse, tau, QubitState.basis(1)),
        average_energy(params, pulse, tau, QubitState.basis(2)),
    )
    product = tau * energy / HALF_PI
    bound = gate_bound(theta)
    return VerificationReport(
        theta=theta,
        tau=tau,
        energy=energy,
        product_normalized=product,
        bound=bound,
        gate_error=error,
        saturates=bool(error <= tol and abs(product - bound) <= tol),
    )
