# speedlimitpy/qubitstate.py
"""Qubit state in the fixed two-state basis.

A state is written ``psi = a1 * psi1(0) + a2 * psi2(0)`` where
``psi1(0) = (0, 1)`` and ``psi2(0) = (1, 0)`` are the two orthogonal
stationary states the gate swaps. :class:`QubitState` stores the coefficient
pair ``(a1, a2)``; it never stores raw column vectors, so the basis ordering
cannot be transposed by accident.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StateNormError

#: Norm deviation above which a state is rejected as not normalized.
NORM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class QubitState:
    """Complex amplitude pair ``(a1, a2)`` over the fixed basis.

    Args:
        a1: Amplitude of ``psi1(0)``.
        a2: Amplitude of ``psi2(0)``.

    Example:
        The two basis states and an equal superposition::

            first = QubitState.basis(1)      # a1 = 1
            second = QubitState.basis(2)     # a2 = 1
            plus = QubitState(1, 1).normalized()
    """

    a1: complex
    a2: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "a1", complex(self.a1))
        object.__setattr__(self, "a2", complex(self.a2))

    @classmethod
    def basis(cls, index: int) -> "QubitState":
        """Return ``psi1(0)`` for ``index=1`` or ``psi2(0)`` for ``index=2``."""
        if index == 1:
            return cls(1.0, 0.0)
        if index == 2:
            return cls(0.0, 1.0)
        raise ValueError(f"basis index must be 1 or 2, got {index!r}")

    @classmethod
    def from_array(cls, values) -> "QubitState":
        """Build a state from any length-2 sequence of amplitudes."""
        arr = np.asarray(values, dtype=complex).reshape(-1)
        if arr.shape != (2,):
            raise ValueError(f"expected two amplitudes, got shape {arr.shape}")
        return cls(complex(arr[0]), complex(arr[1]))

    def as_array(self) -> np.ndarray:
        """Return the amplitudes as a complex numpy vector ``[a1, a2]``."""
        return np.array([self.a1, self.a2], dtype=complex)

    def norm(self) -> float:
        """Return ``sqrt(|a1|^2 + |a2|^2)``."""
        return math.hypot(abs(self.a1), abs(self.a2))

    def is_normalized(self, tol: float = NORM_TOLERANCE) -> bool:
        """Whether the norm equals one within *tol*."""
        return abs(self.norm() - 1.0) <= tol

    def require_normalized(self, tol: float = NORM_TOLERANCE) -> None:
        """Raise :class:`StateNormError` unless the state is normalized."""
        if not self.is_normalized(tol):
            raise StateNormError(
                f"state ({self.a1}, {self.a2}) has norm {self.norm():.17g}; "
                f"expected 1 within {tol:g}"
            )

    def normalized(self) -> "QubitState":
        """Return the state rescaled to unit norm.

        Raises:
            StateNormError: If the state is the zero vector.
        """
        n = self.norm()
        if n == 0.0:
            raise StateNormError("cannot normalize the zero state")
        return QubitState(self.a1 / n, self.a2 / n)

    def inner(self, other: "QubitState") -> complex:
        """Return ``<self|other>``."""
        return self.a1.conjugate() * other.a1 + self.a2.conjugate() * other.a2

    def max_deviation(self, other: "QubitState") -> float:
        """Largest component-wise modulus of ``self - other``."""
        return max(abs(self.a1 - other.a1), abs(self.a2 - other.a2))

