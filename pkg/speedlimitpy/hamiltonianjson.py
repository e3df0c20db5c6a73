# speedlimitpy/hamiltonianjson.py
"""Hamiltonian spec JSON handling.

This module provides the HamiltonianSpec class, which reads and writes the
JSON document describing one drive ``H(t) = f(t) * H0``::

    {"e11": 1.0, "e22": 1.0, "e12": 0.5, "phi": 3.141592653589793,
     "pulse": {"type": "constant", "value": 1.0, "duration": 3.141592653589793}}

Field names are exact. Unknown fields are rejected at both levels, and every
error names the offending field together with its line and column in the
source text when the source was a string.
"""

from __future__ import annotations

import json
import re
from typing import Any

from .errors import SpecParseError
from .hamiltonian import (
    DETERMINANT_NONNEGATIVE,
    E11_NONNEGATIVE,
    E12_NONNEGATIVE,
    E22_NONNEGATIVE,
    HamiltonianParams,
    validate,
)
from .pulse import PulseProfile

#: Top-level fields of a Hamiltonian spec document.
SPEC_FIELDS = ("e11", "e22", "e12", "phi", "pulse")

_VIOLATION_FIELDS = {
    E11_NONNEGATIVE: "e11",
    E22_NONNEGATIVE: "e22",
    E12_NONNEGATIVE: "e12",
    DETERMINANT_NONNEGATIVE: "e12",
}


class HamiltonianSpec:
    """Wrapper for a Hamiltonian spec JSON document.

    Holds the parsed dictionary, the JSON text, and the validated
    :class:`HamiltonianParams` and :class:`PulseProfile` it describes.

    Args:
        src (str | dict[str, Any]): Spec as a JSON string or a dictionary.

    Attributes:
        text (str): The JSON text of the Hamiltonian spec.
        data (dict[str, Any]): The parsed dictionary.
        params (HamiltonianParams): The static Hamiltonian; always passes
            :func:`~speedlimitpy.hamiltonian.validate`.
        pulse (PulseProfile): The pulse profile.

    Raises:
        SpecParseError: If the text is not JSON, a field is missing, unknown
            or mistyped, or the parameters fail validation.

    Example:
        Loading a spec from text and from a dictionary::

            spec = HamiltonianSpec('''
            {"e11": 1, "e22": 1, "e12": 1, "phi": 0,
             "pulse": {"type": "constant", "value": 1}}
            ''')
            spec.params.e12        # 1.0

            same = HamiltonianSpec.from_model(spec.params, spec.pulse)
    """

    def __init__(self, src: str | dict[str, Any]):
        if isinstance(src, str):
            self.text: str = src.strip()
            try:
                self.data: dict[str, Any] = json.loads(self.text)
            except json.JSONDecodeError as exc:
                raise SpecParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
            source = self.text
        else:
            self.data = src
            self.text = json.dumps(src, indent=2)
            source = None

        try:
            self.params, self.pulse = _parse(self.data)
        except SpecParseError as exc:
            if source is None or exc.field is None or exc.line is not None:
                raise
            line, column = _locate(source, exc.field)
            raise SpecParseError(
                exc.message, field=exc.field, line=line, column=column
            ) from exc

    @classmethod
    def from_model(cls, params: HamiltonianParams, pulse: PulseProfile) -> "HamiltonianSpec":
        """Build the Hamiltonian spec document for *params* driven by *pulse*."""
        return cls({**params.to_dict(), "pulse": pulse.to_dict()})

    @classmethod
    def read(cls, path) -> "HamiltonianSpec":
        """Load a spec from a file path."""
        with open(path, encoding="utf-8") as fh:
            return cls(fh.read())

    def write(self, path) -> None:
        """Write the JSON text to *path* (newline-terminated)."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.text + "\n")


def _parse(data: Any) -> tuple[HamiltonianParams, PulseProfile]:
    if not isinstance(data, dict):
        raise SpecParseError("spec must be a JSON object")
    for name in data:
        if name not in SPEC_FIELDS:
            raise SpecParseError("unknown field", field=name)
    for name in SPEC_FIELDS:
        if name not in data:
            raise SpecParseError("missing required field", field=name)

    numbers = {}
    for name in SPEC_FIELDS[:4]:
        value = data[name]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SpecParseError(f"expected a number, got {value!r}", field=name)
        numbers[name] = float(value)

    params = HamiltonianParams(**numbers)
    verdict = validate(params)
    if not verdict.accepted:
        field = _VIOLATION_FIELDS.get(verdict.violations[0])
        raise SpecParseError(
            "parameters rejected: " + ", ".join(verdict.violations), field=field
        )
    return params, PulseProfile.from_dict(data["pulse"])


def _locate(text: str, field: str) -> tuple[int | None, int | None]:
    """Return the 1-based line and column of *field*'s key in *text*."""
    start = 0
    parts = field.split(".")
    for depth, part in enumerate(parts):
        key = re.sub(r"\[\d+\]$", "", part)
        match = re.compile(r'"' + re.escape(key) + r'"\s*:').search(text, start)
        if match is None:
            if depth == 0:
                return None, None
            break
        start = match.start()
    line = text.count("\n", 0, start) + 1
    column = start - (text.rfind("\n", 0, start) + 1) + 1
    return line, column
