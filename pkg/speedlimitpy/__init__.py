# speedlimitpy/__init__.py
"""speedlimitpy - quantum speed limits of a driven qubit.

speedlimitpy simulates a qubit under ``H(t) = f(t) * H0`` exactly, builds
minimum-time NOT gates with an arbitrary phase shift, evaluates the
closed-form minimum-time bounds, and stress-tests those bounds with a
seeded constrained search.

This module exposes the public API:

- HamiltonianParams/validate/eigenvalues: the static Hamiltonian and its constraints
- PulseProfile: constant, piecewise and sampled pulses with their action ``F(t)``
- QubitState/Unitary2: states and propagators in the fixed two-state basis
- closed_form_propagator/evolve_ode_oracle: exact evolution and the RK4 cross-check
- min_gate_time/min_rotation_time: the closed-form bounds
- synthesize_gate/verify_gate: minimum-time gate construction and checking
- minimize_product/rotation_search: numerical stress tests of the bounds
- HamiltonianSpec: the Hamiltonian spec JSON format

Example:
    Building and checking the phase-free NOT gate::

        import speedlimitpy as sl

        gate = sl.synthesize_gate(sl.GateSpec(theta=0.0, energy=1.0))
        report = sl.verify_gate(gate.params, gate.pulse, gate.tau, 0.0)
        report.saturates               # True
        report.product_normalized      # 1.0

Attributes:
    __all__ (list): List of public API symbols exported by this module.
"""

from . import errors
from .__version__ import __version__
from .hamiltonian import (
    CONSTRAINTS,
    HamiltonianParams,
    ValidationVerdict,
    eigenvalues,
    hamiltonian_at,
    validate,
)
from .hamiltonianjson import HamiltonianSpec
from .propagator import (
    EvolutionRecord,
    Unitary2,
    average_energy,
    closed_form_propagator,
    evolve_closed_form,
    evolve_ode_oracle,
    trajectory,
    unitarity_defect,
)
from .pulse import VALID_PULSE_TYPES, PulseProfile, accumulated_action
from .qubitstate import QubitState
from .search import (
    BoundReport,
    SearchConfig,
    evaluate_candidate,
    evaluate_rotation,
    minimize_product,
    rotation_search,
    sample_candidates,
    undershoot_tolerance,
)
from .speedlimit import (
    BoundQuery,
    from_wavelength,
    min_gate_time,
    min_rotation_time,
    orthogonalization_time,
    to_natural_energy,
    to_si_energy,
)
from .synthesis import (
    VALID_BRANCHES,
    GateSpec,
    SynthesizedGate,
    VerificationReport,
    gate_error,
    gate_target,
    synthesize_gate,
    verify_gate,
)

__all__ = [
    "HamiltonianParams",
    "ValidationVerdict",
    "validate",
    "eigenvalues",
    "hamiltonian_at",
    "CONSTRAINTS",
    "PulseProfile",
    "accumulated_action",
    "VALID_PULSE_TYPES",
    "QubitState",
    "HamiltonianSpec",
    "Unitary2",
    "EvolutionRecord",
    "closed_form_propagator",
    "evolve_closed_form",
    "evolve_ode_oracle",
    "average_energy",
    "unitarity_defect",
    "trajectory",
    "BoundQuery",
    "orthogonalization_time",
    "min_gate_time",
    "min_rotation_time",
    "from_wavelength",
    "to_natural_energy",
    "to_si_energy",
    "GateSpec",
    "SynthesizedGate",
    "VerificationReport",
    "VALID_BRANCHES",
    "synthesize_gate",
    "gate_target",
    "gate_error",
    "verify_gate",
    "SearchConfig",
    "BoundReport",
    "sample_candidates",
    "evaluate_candidate",
    "evaluate_rotation",
    "minimize_product",
    "rotation_search",
    "undershoot_tolerance",
    "errors",
    "__version__",
]
