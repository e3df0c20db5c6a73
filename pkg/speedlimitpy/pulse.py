# speedlimitpy/pulse.py
"""Pulse profiles ``f(t)`` and their accumulated action ``F(t)``.

The drive is ``H(t) = f(t) * H0`` with ``f(t) > 0``. Because ``H(t)``
commutes with itself at all times, the dynamics depend on ``f`` only through
``F(t) = integral of f over [0, t]``. Three shapes are supported:

* ``constant``  -- ``f(t) = c`` on ``[0, T]`` (``T`` may be open-ended);
* ``piecewise`` -- ``f(t) = values[k]`` on ``[b_k, b_{k+1})``, last piece closed;
* ``sampled``   -- linear interpolation of ``values`` on ``grid``.

Example:
    Building one pulse of each shape::

        flat = PulseProfile.constant(2.0)
        steps = PulseProfile.piecewise([0.0, 1.0, 2.0], [1.0, 3.0])
        ramp = PulseProfile.sampled([0.0, 2.0], [1.0, 3.0])

        flat.accumulated_action(3.0)    # 6.0
        steps.accumulated_action(2.0)   # 4.0
        ramp.accumulated_action(2.0)    # 4.0
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np
from scipy import integrate

from .errors import DomainExceededError, InvalidPulseError, SpecParseError

# ── Constants ────────────────────────────────────────────────────── #

CONSTANT = "constant"
PIECEWISE = "piecewise"
SAMPLED = "sampled"

#: Pulse shapes accepted by :class:`PulseProfile` and Hamiltonian spec files.
VALID_PULSE_TYPES = {CONSTANT, PIECEWISE, SAMPLED}

#: Absolute tolerance for adaptive quadrature of sampled pulses.
QUADRATURE_EPSABS = 1e-12

#: Relative slack allowed past the end of a bounded domain.
DOMAIN_RTOL = 1e-12

_FIELDS = {
    CONSTANT: ({"type", "value"}, {"duration"}),
    PIECEWISE: ({"type", "breakpoints", "values"}, set()),
    SAMPLED: ({"type", "grid", "values"}, set()),
}


@dataclass(frozen=True)
class PulseProfile:
    """A strictly positive modulation ``f(t)`` on ``[0, end]``.

    Use the :meth:`constant`, :meth:`piecewise` and :meth:`sampled` builders
    rather than the raw constructor.

    Attributes:
        kind (str): One of :data:`VALID_PULSE_TYPES`.
        knots (tuple[float, ...]): Breakpoints (piecewise), grid (sampled), or
            ``(0, end)`` (constant). Always starts at 0 and strictly increases.
        values (tuple[float, ...]): Pulse values; all strictly positive.

    Raises:
        InvalidPulseError: If the shape is malformed or any value is not
            strictly positive.
    """

    kind: str
    knots: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.kind not in VALID_PULSE_TYPES:
            raise InvalidPulseError(
                f"pulse type must be one of {sorted(VALID_PULSE_TYPES)}, got {self.kind!r}"
            )
        knots = tuple(float(k) for k in self.knots)
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)

        expected = {
            CONSTANT: (2, 1),
            PIECEWISE: (len(knots), len(knots) - 1),
            SAMPLED: (len(knots), len(knots)),
        }[self.kind]
        if len(knots) < 2 or expected != (len(knots), len(values)):
            raise InvalidPulseError(
                f"{self.kind} pulse has {len(knots)} knots and {len(values)} values"
            )
        if knots[0] != 0.0:
            raise InvalidPulseError(f"pulse domain must start at 0, got {knots[0]!r}")
        if any(not b > a for a, b in zip(knots, knots[1:])):
            raise InvalidPulseError(f"pulse knots must strictly increase: {knots}")
        if any(math.isnan(k) for k in knots) or any(math.isinf(k) for k in knots[:-1]):
            raise InvalidPulseError(f"pulse knots must be finite: {knots}")
        if self.kind != CONSTANT and math.isinf(knots[-1]):
            raise InvalidPulseError(f"{self.kind} pulse needs a finite domain")
        if not all(math.isfinite(v) and v > 0.0 for v in values):
            raise InvalidPulseError(f"pulse values must be finite and > 0, got {values}")

    # ── builders ────────────────────────────────────────────────── #

    @classmethod
    def constant(cls, value: float, duration: float | None = None) -> "PulseProfile":
        """``f(t) = value`` on ``[0, duration]`` (open-ended when ``None``)."""
        end = math.inf if duration is None else duration
        return cls(CONSTANT, (0.0, end), (value,))

    @classmethod
    def piecewise(cls, breakpoints: Sequence[float], values: Sequence[float]) -> "PulseProfile":
        """``f(t) = values[k]`` on ``[breakpoints[k], breakpoints[k+1])``."""
        return cls(PIECEWISE, tuple(breakpoints), tuple(values))

    @classmethod
    def sampled(cls, grid: Sequence[float], values: Sequence[float]) -> "PulseProfile":
        """Linear interpolation of *values* over *grid*."""
        return cls(SAMPLED, tuple(grid), tuple(values))

    # ── evaluation ──────────────────────────────────────────────── #

    @property
    def end(self) -> float:
        """End of the domain (``math.inf`` for an open-ended constant pulse)."""
        return self.knots[-1]

    @property
    def duration(self) -> float | None:
        """Finite domain length, or ``None`` when open-ended."""
        return None if math.isinf(self.end) else self.end

    def _check_time(self, t: float) -> float:
        t = float(t)
        if math.isnan(t) or t < 0.0:
            raise DomainExceededError(f"time must be >= 0, got {t!r}")
        if t > self.end:
            if t > self.end + DOMAIN_RTOL * max(1.0, self.end):
                raise DomainExceededError(
                    f"time {t!r} exceeds the pulse domain [0, {self.end!r}]"
                )
            t = self.end
        return t

    def _piece_index(self, t: float) -> int:
        return min(bisect.bisect_right(self.knots, t) - 1, len(self.knots) - 2)

    def value_at(self, t: float) -> float:
        """Return ``f(t)``.

        Raises:
            DomainExceededError: If *t* is negative or past the domain end.
        """
        t = self._check_time(t)
        if self.kind == CONSTANT:
            return self.values[0]
        if self.kind == PIECEWISE:
            return self.values[self._piece_index(t)]
        return float(np.interp(t, self.knots, self.values))

    def accumulated_action(self, t: float) -> float:
        """Return ``F(t)``: exact for constant/piecewise, quadrature for sampled.

        Raises:
            DomainExceededError: If *t* is negative or past the domain end.
        """
        t = self._check_time(t)
        if t == 0.0:
            return 0.0
        if self.kind == CONSTANT:
            return self.values[0] * t
        if self.kind == PIECEWISE:
            k = self._piece_index(t)
            full = sum(
                v * (b - a)
                for a, b, v in zip(self.knots[:k], self.knots[1 : k + 1], self.values[:k])
            )
            return full + self.values[k] * (t - self.knots[k])
        inner = [k for k in self.knots if 0.0 < k < t]
        value, _ = integrate.quad(
            lambda s: float(np.interp(s, self.knots, self.values)),
            0.0,
            t,
            points=inner or None,
            epsabs=QUADRATURE_EPSABS,
            limit=max(50, 2 * len(inner) + 2),
        )
        return value

    def pieces(self, t: float) -> list[tuple[float, float, int]]:
        """Split ``[0, t]`` into intervals on which ``f`` is smooth.

        Returns:
            list[tuple[float, float, int]]: ``(start, stop, index)`` triples;
            evaluate ``f`` on a triple with :meth:`piece_values`.
        """
        t = self._check_time(t)
        if t == 0.0:
            return []
        if self.kind == CONSTANT:
            return [(0.0, t, 0)]
        out = []
        for k in range(len(self.knots) - 1):
            a, b = self.knots[k], self.knots[k + 1]
            if a >= t:
                break
            out.append((a, min(b, t), k))
        return out

    def piece_values(self, index: int, s) -> np.ndarray:
        """Evaluate the smooth formula of piece *index* at times *s*.

        The formula is extended to the closed piece, so both endpoints see
        the same smooth branch.
        """
        s = np.asarray(s, dtype=float)
        if self.kind == CONSTANT:
            return np.full_like(s, self.values[0])
        if self.kind == PIECEWISE:
            return np.full_like(s, self.values[index])
        a, b = self.knots[index], self.knots[index + 1]
        va, vb = self.values[index], self.values[index + 1]
        return va + (vb - va) * (s - a) / (b - a)

    # ── transformations ─────────────────────────────────────────── #

    def shifted(self, t0: float) -> "PulseProfile":
        """Return ``g(s) = f(s + t0)`` on ``[0, end - t0]``.

        Raises:
            DomainExceededError: If *t0* does not leave a nonempty domain.
        """
        t0 = self._check_time(t0)
        if t0 >= self.end:
            raise DomainExceededError(f"shift {t0!r} leaves an empty pulse domain")
        if self.kind == CONSTANT:
            rest = None if self.duration is None else self.end - t0
            return PulseProfile.constant(self.values[0], rest)
        k = self._piece_index(t0)
        later = [x for x in self.knots[k + 1 :] if x > t0]
        knots = [0.0] + [x - t0 for x in later]
        if self.kind == PIECEWISE:
            return PulseProfile.piecewise(knots, self.values[k:])
        tail = self.values[len(self.knots) - len(later) :]
        return PulseProfile.sampled(knots, [self.value_at(t0), *tail])

    def rescaled(self, factor: float) -> "PulseProfile":
        """Return ``f_c(s) = c * f(c * s)`` on ``[0, end / c]``.

        ``F_c(t / c) == F(t)``, so evolving under the rescaled pulse for
        ``t / c`` reproduces the original evolution for ``t``.

        Raises:
            InvalidPulseError: If *factor* is not strictly positive.
        """
        if not (math.isfinite(factor) and factor > 0.0):
            raise InvalidPulseError(f"rescale factor must be > 0, got {factor!r}")
        return PulseProfile(
            self.kind,
            tuple(k / factor for k in self.knots),
            tuple(v * factor for v in self.values),
        )

    # ── serialization ───────────────────────────────────────────── #

    def to_dict(self) -> dict[str, Any]:
        """Return the pulse as a spec-JSON object."""
        if self.kind == CONSTANT:
            data: dict[str, Any] = {"type": CONSTANT, "value": self.values[0]}
            if self.duration is not None:
                data["duration"] = self.duration
            return data
        if self.kind == PIECEWISE:
            return {"type": PIECEWISE, "breakpoints": list(self.knots), "values": list(self.values)}
        return {"type": SAMPLED, "grid": list(self.knots), "values": list(self.values)}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "PulseProfile":
        """Parse a spec-JSON pulse object, rejecting unknown fields.

        Raises:
            SpecParseError: On a missing, unknown or mistyped field, or when
                the described pulse is invalid.
        """
        if not isinstance(data, Mapping):
            raise SpecParseError("pulse must be a JSON object", field="pulse")
        kind = data.get("type")
        if kind not in VALID_PULSE_TYPES:
            raise SpecParseError(
                f"must be one of {sorted(VALID_PULSE_TYPES)}, got {kind!r}",
                field="pulse.type",
            )
        required, optional = _FIELDS[kind]
        for name in sorted(set(data) - required - optional):
            raise SpecParseError(f"unknown field for a {kind} pulse", field=f"pulse.{name}")
        for name in sorted(required - set(data)):
            raise SpecParseError("missing required field", field=f"pulse.{name}")

        try:
            if kind == CONSTANT:
                duration = data.get("duration")
                return cls.constant(
                    _number(data["value"], "pulse.value"),
                    None if duration is None else _number(duration, "pulse.duration"),
                )
            key = "breakpoints" if kind == PIECEWISE else "grid"
            knots = _numbers(data[key], f"pulse.{key}")
            values = _numbers(data["values"], "pulse.values")
            return cls(kind, tuple(knots), tuple(values))
        except InvalidPulseError as exc:
            raise SpecParseError(str(exc), field="pulse") from exc


def accumulated_action(pulse: PulseProfile, t: float) -> float:
    """Return ``F(t) = integral of f over [0, t]``; see :meth:`PulseProfile.accumulated_action`."""
    return pulse.accumulated_action(t)


def _number(value: Any, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecParseError(f"expected a number, got {value!r}", field=field)
    return float(value)


def _numbers(value: Any, field: str) -> list[float]:
    if not isinstance(value, list):
        raise SpecParseError(f"expected a list of numbers, got {value!r}", field=field)
    return [_number(v, f"{field}[{i}]") for i, v in enumerate(value)]
