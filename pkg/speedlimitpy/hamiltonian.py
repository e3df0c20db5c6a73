# speedlimitpy/hamiltonian.py
"""Static Hamiltonian part ``H0`` of the drive ``H(t) = f(t) * H0``.

This module provides :class:`HamiltonianParams` for the four numbers that fix
``H0 = [[E11, E12 e^{i phi}], [E12 e^{-i phi}, E22]]``, the constraint check
:func:`validate`, the spectrum :func:`eigenvalues` and the instantaneous
matrix :func:`hamiltonian_at`.

Energies are in natural units (hbar = 1), so an energy is an angular
frequency and ``h = 2 pi``. ``H0`` must be nonnegative definite: energy is
measured from the ground state.
"""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import InvalidParamsError

if TYPE_CHECKING:
    from .pulse import PulseProfile
    from .qubitstate import QubitState

# ── Constants ────────────────────────────────────────────────────── #

#: Names used in :class:`ValidationVerdict` for each constraint.
E11_NONNEGATIVE = "e11_nonnegative"
E22_NONNEGATIVE = "e22_nonnegative"
DETERMINANT_NONNEGATIVE = "determinant_nonnegative"
E12_NONNEGATIVE = "e12_nonnegative"
FINITE = "finite"

#: All constraint names in the order they are checked.
CONSTRAINTS = (FINITE, E11_NONNEGATIVE, E22_NONNEGATIVE, E12_NONNEGATIVE, DETERMINANT_NONNEGATIVE)

#: Relative slack on ``e11*e22 - e12**2 >= 0`` for floating-point boundary cases.
DETERMINANT_RTOL = 4 * sys.float_info.epsilon

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ValidationVerdict:
    """Outcome of :func:`validate`.

    Attributes:
        accepted (bool): True iff no constraint is violated.
        violations (tuple[str, ...]): Names of the violated constraints, drawn
            from :data:`CONSTRAINTS`.
    """

    accepted: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.accepted


@dataclass(frozen=True)
class HamiltonianParams:
    """Entries of the static Hamiltonian ``H0``.

    The off-diagonal is stored as a magnitude ``e12`` and a phase ``phi``;
    ``phi`` is reduced to ``[0, 2 pi)`` on construction. Construction never
    rejects values, so that :func:`validate` can report on anything; use
    :meth:`canonical` to fold a negative ``e12`` into the phase.

    Args:
        e11: Diagonal energy coupling ``psi2(0)`` to itself.
        e22: Diagonal energy coupling ``psi1(0)`` to itself.
        e12: Off-diagonal magnitude.
        phi: Off-diagonal phase in radians.

    Example:
        The parameters of the fastest phase-free NOT gate at unit energy::

            params = HamiltonianParams(1.0, 1.0, 1.0, math.pi)
            validate(params).accepted      # True
            eigenvalues(params)            # (2.0, 0.0)
    """

    e11: float
    e22: float
    e12: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        for name in ("e11", "e22", "e12", "phi"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if math.isfinite(self.phi):
            reduced = math.fmod(self.phi, TWO_PI)
            if reduced < 0.0:
                reduced += TWO_PI
            if reduced >= TWO_PI:
                reduced = 0.0
            object.__setattr__(self, "phi", reduced)

    @classmethod
    def canonical(cls, e11: float, e22: float, e12: float, phi: float = 0.0) -> "HamiltonianParams":
        """Build params with a negative off-diagonal folded into the phase."""
        if e12 < 0:
            return cls(e11, e22, -e12, phi + math.pi)
        return cls(e11, e22, e12, phi)

    @property
    def trace(self) -> float:
        return self.e11 + self.e22

    @property
    def determinant(self) -> float:
        return self.e11 * self.e22 - self.e12 * self.e12

    def matrix(self) -> np.ndarray:
        """``H0`` acting on raw column vectors, as in the drive definition."""
        off = self.e12 * cmath.exp(1j * self.phi)
        return np.array([[self.e11, off], [off.conjugate(), self.e22]], dtype=complex)

    def coefficient_matrix(self) -> np.ndarray:
        """``H0`` acting on the coefficient pair ``(a1, a2)``.

        With ``psi1(0) = (0, 1)`` and ``psi2(0) = (1, 0)`` the Schrodinger
        system reads ``i da/dt = f(t) K a`` with
        ``K = [[E22, E12 e^{-i phi}], [E12 e^{i phi}, E11]]``.
        """
        off = self.e12 * cmath.exp(-1j * self.phi)
        return np.array([[self.e22, off], [off.conjugate(), self.e11]], dtype=complex)

    def expectation(self, state: "QubitState") -> float:
        """Return ``<psi|H0|psi>`` for a state in the coefficient representation."""
        a1, a2 = state.a1, state.a2
        cross = a1.conjugate() * self.e12 * cmath.exp(-1j * self.phi) * a2
        return (
            self.e22 * abs(a1) ** 2
            + self.e11 * abs(a2) ** 2
            + 2.0 * cross.real
        )

    def scaled(self, factor: float) -> "HamiltonianParams":
        """Return ``factor * H0``."""
        return HamiltonianParams(
            self.e11 * factor, self.e22 * factor, self.e12 * factor, self.phi
        )

    def to_dict(self) -> dict[str, float]:
        return {"e11": self.e11, "e22": self.e22, "e12": self.e12, "phi": self.phi}


def validate(params: HamiltonianParams) -> ValidationVerdict:
    """Check the nonnegative-definiteness constraints on ``H0``.

    Accepts iff ``e11 >= 0``, ``e22 >= 0``, ``e12 >= 0`` and
    ``e11*e22 - e12**2 >= 0`` (the last up to :data:`DETERMINANT_RTOL`
    relative slack). Never raises.

    Args:
        params: Parameters to check; any field values are accepted.

    Returns:
        ValidationVerdict: Verdict naming every violated constraint.

    Example::

        validate(HamiltonianParams(1, 1, 2, 0)).violations
        # ('determinant_nonnegative',)
    """
    values = (params.e11, params.e22, params.e12, params.phi)
    if not all(math.isfinite(v) for v in values):
        return ValidationVerdict(False, (FINITE,))

    violations = []
    if params.e11 < 0:
        violations.append(E11_NONNEGATIVE)
    if params.e22 < 0:
        violations.append(E22_NONNEGATIVE)
    if params.e12 < 0:
        violations.append(E12_NONNEGATIVE)
    product = params.e11 * params.e22
    square = params.e12 * params.e12
    if product - square < -DETERMINANT_RTOL * max(abs(product), square):
        violations.append(DETERMINANT_NONNEGATIVE)
    return ValidationVerdict(not violations, tuple(violations))


def require_valid(params: HamiltonianParams) -> None:
    """Raise :class:`InvalidParamsError` unless *params* pass :func:`validate`."""
    verdict = validate(params)
    if not verdict.accepted:
        raise InvalidParamsError(verdict.violations)


def eigenvalues(params: HamiltonianParams) -> tuple[float, float]:
    """Return the eigenvalues ``(E1, E2)`` of ``H0`` with ``E1 >= E2 >= 0``.

    Uses the trace-consistent form
    ``(E11 + E22)/2 +- sqrt((E11 - E22)**2 + 4 E12**2)/2``; the smaller root is
    taken as ``det/E1`` so it stays accurate when it is tiny.

    Raises:
        InvalidParamsError: If *params* fail :func:`validate`.
    """
    require_valid(params)
    root = math.hypot(params.e11 - params.e22, 2.0 * params.e12)
    e1 = 0.5 * (params.trace + root)
    if e1 == 0.0:
        return 0.0, 0.0
    e2 = max(params.determinant / e1, 0.0)
    return e1, e2


def hamiltonian_at(params: HamiltonianParams, pulse: "PulseProfile", t: float) -> np.ndarray:
    """Return the instantaneous Hamiltonian ``H(t) = f(t) * H0``.

    Hermiticity is exact: the lower off-diagonal entry is the conjugate of
    the upper one.

    Raises:
        InvalidParamsError: If *params* fail :func:`validate`.
        DomainExceededError: If *t* lies outside the pulse domain.
    """
    require_valid(params)
    return pulse.value_at(t) * params.matrix()
