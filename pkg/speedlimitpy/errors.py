# speedlimitpy/errors.py
"""Exception types raised by speedlimitpy.

Every error that reports bad caller input derives from :class:`ValueError`
as well as from :class:`SpeedLimitError`, so code written against plain
``ValueError`` keeps working while callers that want to tell the cases apart
can catch the specific class.
"""

from __future__ import annotations

from typing import Sequence


class SpeedLimitError(Exception):
    """Base class for every error raised by speedlimitpy."""


class InvalidParamsError(SpeedLimitError, ValueError):
    """Hamiltonian parameters violate the nonnegative-definiteness constraints.

    Attributes:
        violations (tuple[str, ...]): Names of the violated constraints, as
            reported by :func:`speedlimitpy.hamiltonian.validate`.
    """

    def __init__(self, violations: Sequence[str]):
        self.violations = tuple(violations)
        super().__init__(
            "Hamiltonian parameters rejected: " + ", ".join(self.violations)
        )


class DomainExceededError(SpeedLimitError, ValueError):
    """A time lies outside the domain on which the pulse is defined."""


class InvalidPulseError(SpeedLimitError, ValueError):
    """A pulse profile is malformed or not strictly positive."""


class NonPositiveEnergyError(SpeedLimitError, ValueError):
    """An average energy that must be strictly positive is not."""


class NonPositiveDurationError(SpeedLimitError, ValueError):
    """A duration that must be strictly positive is not."""


class NonPositiveWavelengthError(SpeedLimitError, ValueError):
    """A transition wavelength that must be strictly positive is not."""


class AlphaOutOfRangeError(SpeedLimitError, ValueError):
    """A rotation angle lies outside ``[0, pi/2]``."""


class BranchInadmissibleError(SpeedLimitError, ValueError):
    """The requested synthesis branch cannot realize the phase shift."""


class StateNormError(SpeedLimitError, ValueError):
    """A qubit state is not normalized within tolerance."""


class SearchConfigError(SpeedLimitError, ValueError):
    """A search configuration is out of range."""


class SpecParseError(SpeedLimitError, ValueError):
    """A Hamiltonian spec document could not be parsed.

    Attributes:
        message (str): The error text without the location prefix.
        field (str | None): Dotted name of the offending field, if known.
        line (int | None): Line number in the source text, if known.
        column (int | None): Column number in the source text, if known.
    """

    def __init__(
        self,
        message: str,
        *,
        field: str | None = None,
        line: int | None = None,
        column: int | None = None,
    ):
        self.message = message
        self.field = field
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
            if column is not None:
                where.append(f"column {column}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class NoFeasibleCandidateError(SpeedLimitError, RuntimeError):
    """The search budget was exhausted without a candidate inside tolerance.

    This reports budget exhaustion, not a failure of the bound under test.

    Attributes:
        samples (int): Number of sampled candidates evaluated.
    """

    def __init__(self, samples: int, epsilon: float):
        self.samples = samples
        self.epsilon = epsilon
        super().__init__(
            f"no candidate within epsilon={epsilon:g} after {samples} samples "
            "(budget exhausted)"
        )
