# speedlimitpy/speedlimit.py
"""Closed-form minimum-time bounds.

All times are in natural units (hbar = 1, so h = 2 pi): with an energy in
s^-1 the time comes out in seconds. :func:`to_natural_energy` and
:func:`to_si_energy` convert between joules and s^-1 using CODATA constants
from :mod:`scipy.constants`.

The normalized time-energy product ``tau * E / (h/4)`` is bounded below by
:func:`gate_bound` for the NOT gate with phase shift ``theta`` and by
:func:`rotation_bound` for a rotation by ``alpha``.

Example::

    min_gate_time(0.0, 1.0)            # pi/2
    min_gate_time(math.pi / 2, 1.0)    # pi
    min_rotation_time(math.pi / 4, 1.0)  # pi/4

    energy, tau = from_wavelength(397e-9)   # 2.50e-19 J, 6.62e-16 s
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants

from .errors import AlphaOutOfRangeError, NonPositiveEnergyError, NonPositiveWavelengthError

HALF_PI = 0.5 * math.pi


def _require_energy(E: float) -> None:
    if not (math.isfinite(E) and E > 0.0):
        raise NonPositiveEnergyError(f"energy must be > 0, got {E!r}")


def _require_theta(theta: float) -> None:
    if not (math.isfinite(theta) and theta >= 0.0):
        raise ValueError(f"theta must be finite and >= 0, got {theta!r}")


def _require_alpha(alpha: float) -> None:
    if not (math.isfinite(alpha) and 0.0 <= alpha <= HALF_PI):
        raise AlphaOutOfRangeError(f"alpha must lie in [0, pi/2], got {alpha!r}")


def gate_bound(theta: float) -> float:
    """Return the normalized bound ``1 + 2 (theta mod pi) / pi``."""
    _require_theta(theta)
    return 1.0 + 2.0 * math.fmod(theta, math.pi) / math.pi


def rotation_bound(alpha: float) -> float:
    """Return the normalized bound ``2 alpha / pi``."""
    _require_alpha(alpha)
    return 2.0 * alpha / math.pi


def orthogonalization_time(E: float) -> float:
    """Return ``h / 4E = pi / 2E``, the minimum time to reach an orthogonal state.

    Raises:
        NonPositiveEnergyError: If *E* is not strictly positive.
    """
    _require_energy(E)
    return HALF_PI / E


def min_gate_time(theta: float, E: float) -> float:
    """Return ``(h / 4E) * (1 + 2 (theta mod pi) / pi)``.

    The minimum time of the NOT gate with phase shift *theta* at average
    energy *E*. Periodic in *theta* with period ``pi``.

    Raises:
        NonPositiveEnergyError: If *E* is not strictly positive.
        ValueError: If *theta* is negative.
    """
    return orthogonalization_time(E) * gate_bound(theta)


def min_rotation_time(alpha: float, E: float) -> float:
    """Return ``alpha h / (2 pi E) = alpha / E``.

    The minimum time for ``|<psi(tau)|psi(0)>| = cos(alpha)``; equals
    ``(2 alpha / pi) * orthogonalization_time(E)``.

    Raises:
        AlphaOutOfRangeError: If *alpha* is outside ``[0, pi/2]``.
        NonPositiveEnergyError: If *E* is not strictly positive.
    """
    _require_alpha(alpha)
    _require_energy(E)
    return alpha / E


def from_wavelength(wavelength: float) -> tuple[float, float]:
    """Return ``(E, tau)`` in SI units for a transition of *wavelength* metres.

    ``E = hc / 2 lambda`` is the average energy of an equal superposition of
    the ground state and an excited state at ``hc / lambda``; the matching
    orthogonalization time is ``tau = h / 4E = lambda / 2c``.

    Raises:
        NonPositiveWavelengthError: If *wavelength* is not strictly positive.
    """
    if not (math.isfinite(wavelength) and wavelength > 0.0):
        raise NonPositiveWavelengthError(f"wavelength must be > 0, got {wavelength!r}")
    energy = constants.h * constants.c / (2.0 * wavelength)
    return energy, wavelength / (2.0 * constants.c)


def to_natural_energy(energy_joules: float) -> float:
    """Convert joules to s^-1 (divide by hbar)."""
    return energy_joules / constants.hbar


def to_si_energy(energy: float) -> float:
    """Convert s^-1 to joules (multiply by hbar)."""
    return energy * constants.hbar


@dataclass(frozen=True)
class BoundQuery:
    """A bound request: a gate phase shift *theta* or a rotation *alpha*.

    Args:
        theta: Phase shift in radians, ``>= 0``; ignored when *alpha* is set.
        energy: Average energy, ``> 0``.
        alpha: Optional rotation angle in ``[0, pi/2]``.

    Example::

        BoundQuery(theta=3 * math.pi / 2).tau()          # pi
        BoundQuery(alpha=math.pi / 4, energy=2.0).tau()  # pi/8
    """

    theta: float = 0.0
    energy: float = 1.0
    alpha: float | None = None

    def __post_init__(self) -> None:
        _require_theta(self.theta)
        _require_energy(self.energy)
        if self.alpha is not None:
            _require_alpha(self.alpha)

    @property
    def reduced_theta(self) -> float:
        """``theta mod pi``."""
        return math.fmod(self.theta, math.pi)

    def bound(self) -> float:
        """Normalized bound for this query."""
        if self.alpha is not None:
            return rotation_bound(self.alpha)
        return gate_bound(self.theta)

    def tau(self) -> float:
        """Minimum time for this query."""
        if self.alpha is not None:
            return min_rotation_time(self.alpha, self.energy)
        return min_gate_time(self.theta, self.energy)
