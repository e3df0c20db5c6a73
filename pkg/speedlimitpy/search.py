# speedlimitpy/search.py
"""Numerical stress test of the minimum-time bounds.

The search looks for Hamiltonian parameters and an accumulated action ``F``
that realize the gate with phase shift ``theta`` (or a rotation by ``alpha``)
within a tolerance ``epsilon`` while having a smaller normalized
time-energy product than the closed-form bound. Since the dynamics depend
on the pulse only through ``F``, the pulse shape is not searched.

A run has three phases:

1. **Sampling.** ``budget`` candidates are drawn over the whole constraint
   set in independent, seeded shards and evaluated in batch with numpy.
2. **Repair.** Derivative-free coordinate descent on the residual, started
   from the lowest-residual samples and polished with Nelder-Mead, turns
   near misses into feasible candidates.
3. **Refinement.** Coordinate descent on the product, constrained to stay
   feasible, started from the best members of the feasible pool.

The normalized product of a candidate is ``F * max(e11, e22) * 2 / pi``: the
time-averaged energy of the worse basis state times the gate time, in
units of ``h/4``.

Example::

    config = SearchConfig.for_gate(math.pi / 2, epsilon=1e-3, budget=20_000, seed=7)
    report = minimize_product(config)
    report.best_product      # about 2
    report.gap >= -report.tolerance
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from scipy import optimize

from .errors import NoFeasibleCandidateError, SearchConfigError
from .hamiltonian import HamiltonianParams, require_valid, validate
from .propagator import DEGENERATE_E12_RTOL, Unitary2, closed_form_propagator
from .speedlimit import HALF_PI, gate_bound, rotation_bound
from .synthesis import GateSpec, gate_error, gate_target, synthesize_gate

logger = logging.getLogger(__name__)

# ── Constants ────────────────────────────────────────────────────── #

THETA = "theta"
ALPHA = "alpha"

#: Upper end of the sampled accumulated action.
MAX_ACTION = 4.0 * math.pi

#: Minimum admissible undershoot of the bound.
GAP_TOLERANCE = 0.05

#: Above this epsilon a report is flagged as loose-fidelity.
LOOSE_EPSILON = 1e-2

#: Window factor for re-tuning ``F`` after a parameter move.
ACTION_WINDOW = 1.25

#: Evaluation cap of one Nelder-Mead polish.
POLISH_MAXITER = 4000

#: Polishes restarted from the previous optimum while they still improve.
POLISH_RESTARTS = 3

#: Residual assigned to points outside the constraint set.
OUTSIDE_RESIDUAL = 10.0

SEED_MASK = 2**64 - 1

TWO_PI = 2.0 * math.pi

#: Column order of :meth:`BoundReport.csv_row`.
CSV_COLUMNS = ("kind", "angle", "bound", "best_product", "gap", "gate_error", "samples", "seed")

_REPAIR = "repair"
_REFINE = "refine"


def undershoot_tolerance(epsilon: float) -> float:
    """Admissible undershoot of the bound for a run at *epsilon*.

    ``max(0.05, 50 * epsilon)``: 0.05 at ``epsilon = 1e-3``, growing with the
    leakage a looser fidelity allows.
    """
    return max(GAP_TOLERANCE, 50.0 * epsilon)


@dataclass(frozen=True)
class SearchConfig:
    """Configuration of one search run.

    Exactly one of *theta* and *alpha* must be given; prefer the
    :meth:`for_gate` and :meth:`for_rotation` builders.

    Args:
        theta: Gate phase shift, ``>= 0``.
        alpha: Rotation angle in ``[0, pi/2]``.
        epsilon: Feasibility tolerance in ``(0, 0.5)``: Frobenius gate error,
            or overlap residual for rotations.
        budget: Number of sampled candidates, ``>= 1``.
        refine_iterations: Number of coordinate-descent step levels.
        seed: Integer seed; reduced modulo ``2**64``.
        sweeps: Maximum sweeps per step level.
        shards: Number of independent sampling shards.
        repair_starts: Samples handed to the repair phase.
        refine_starts: Feasible candidates handed to refinement.
        inject_synthesized: Add the construction that saturates the bound
            to the feasible pool.

    Raises:
        SearchConfigError: On any out-of-range field.
    """

    theta: float | None = None
    alpha: float | None = None
    epsilon: float = 1e-3
    budget: int = 10_000
    refine_iterations: int = 8
    seed: int = 0
    sweeps: int = 5
    shards: int = 8
    repair_starts: int = 4
    refine_starts: int = 4
    inject_synthesized: bool = True

    def __post_init__(self) -> None:
        if (self.theta is None) == (self.alpha is None):
            raise SearchConfigError("exactly one of theta and alpha must be given")
        if self.theta is not None and not (math.isfinite(self.theta) and self.theta >= 0.0):
            raise SearchConfigError(f"theta must be finite and >= 0, got {self.theta!r}")
        if self.alpha is not None and not (
            math.isfinite(self.alpha) and 0.0 <= self.alpha <= HALF_PI
        ):
            raise SearchConfigError(f"alpha must lie in [0, pi/2], got {self.alpha!r}")
        if not (0.0 < self.epsilon < 0.5):
            raise SearchConfigError(f"epsilon must lie in (0, 0.5), got {self.epsilon!r}")
        for name in ("budget", "refine_iterations", "sweeps", "shards"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise SearchConfigError(f"{name} must be a positive integer, got {value!r}")
        for name in ("repair_starts", "refine_starts"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise SearchConfigError(f"{name} must be a nonnegative integer, got {value!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)):
            raise SearchConfigError(f"seed must be an integer, got {self.seed!r}")

    @classmethod
    def for_gate(cls, theta: float, **kwargs) -> "SearchConfig":
        return cls(theta=theta, **kwargs)

    @classmethod
    def for_rotation(cls, alpha: float, **kwargs) -> "SearchConfig":
        return cls(alpha=alpha, **kwargs)

    @property
    def kind(self) -> str:
        return THETA if self.theta is not None else ALPHA

    @property
    def angle(self) -> float:
        return self.theta if self.theta is not None else self.alpha

    @property
    def bound(self) -> float:
        if self.kind == THETA:
            return gate_bound(self.theta)
        return rotation_bound(self.alpha)


@dataclass(frozen=True)
class Candidate:
    """One evaluated point ``(params, F)``."""

    params: HamiltonianParams
    action: float
    product: float
    residual: float

    def vector(self) -> list[float]:
        p = self.params
        return [p.e11, p.e22, p.e12, p.phi, self.action]


@dataclass(frozen=True)
class BoundReport:
    """Result of :func:`minimize_product` or :func:`rotation_search`.

    Attributes:
        kind (str): ``"theta"`` or ``"alpha"``.
        angle (float): The phase shift or rotation angle.
        bound (float): Closed-form normalized bound.
        best_product (float): Smallest feasible normalized product found.
        gap (float): ``best_product - bound``.
        best_params (HamiltonianParams): Parameters of the best candidate.
        best_action (float): ``F`` of the best candidate.
        gate_error (float): Residual of the best candidate (Frobenius gate
            error, or overlap residual for rotations).
        samples (int): Sampled candidates.
        evaluations (int): All objective evaluations, samples included.
        seed (int): Seed of the run.
        epsilon (float): Feasibility tolerance.
        tolerance (float): :func:`undershoot_tolerance` of *epsilon*.
        loose_fidelity (bool): True when *epsilon* exceeds :data:`LOOSE_EPSILON`.
        degenerate (bool): True for the trivial ``alpha = 0`` case.
        history (tuple[float, ...]): Best product after each refinement level;
            non-increasing.
    """

    kind: str
    angle: float
    bound: float
    best_product: float
    gap: float
    best_params: HamiltonianParams
    best_action: float
    gate_error: float
    samples: int
    evaluations: int
    seed: int
    epsilon: float
    tolerance: float
    loose_fidelity: bool = False
    degenerate: bool = False
    history: tuple[float, ...] = field(default=())

    @property
    def within_tolerance(self) -> bool:
        """Whether ``gap >= -tolerance``."""
        return self.gap >= -self.tolerance

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "angle": self.angle,
            "bound": self.bound,
            "best_product": self.best_product,
            "gap": self.gap,
            "best_params": self.best_params.to_dict(),
            "best_action": self.best_action,
            "gate_error": self.gate_error,
            "samples": self.samples,
            "evaluations": self.evaluations,
            "seed": self.seed,
            "epsilon": self.epsilon,
            "tolerance": self.tolerance,
            "loose_fidelity": self.loose_fidelity,
            "degenerate": self.degenerate,
            "history": list(self.history),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def csv_row(self) -> tuple:
        """Values in :data:`CSV_COLUMNS` order."""
        return (
            self.kind,
            self.angle,
            self.bound,
            self.best_product,
            self.gap,
            self.gate_error,
            self.samples,
            self.seed,
        )


# ── sampling ────────────────────────────────────────────────────── #


def _shard_sizes(budget: int, shards: int) -> list[int]:
    shards = min(shards, budget)
    base, extra = divmod(budget, shards)
    return [base + (1 if k < extra else 0) for k in range(shards)]


def _shards(config: SearchConfig) -> Iterator[tuple[np.ndarray, ...]]:
    """Yield ``(e11, e22, e12, phi, F)`` arrays, one tuple per shard."""
    sizes = _shard_sizes(config.budget, config.shards)
    children = np.random.SeedSequence(int(config.seed) & SEED_MASK).spawn(len(sizes))
    for seq, n in zip(children, sizes):
        rng = np.random.default_rng(seq)
        e11 = rng.random(n)
        e22 = rng.random(n)
        rho = rng.random(n)
        phi = TWO_PI * rng.random(n)
        action = MAX_ACTION * (1.0 - rng.random(n))
        yield e11, e22, rho * np.sqrt(e11 * e22), phi, action


def sample_candidates(config: SearchConfig) -> Iterator[tuple[HamiltonianParams, float]]:
    """Yield ``config.budget`` seeded candidates ``(params, F)``.

    ``e11, e22`` are uniform on ``[0, 1)``, ``e12 = rho * sqrt(e11 e22)`` with
    ``rho`` uniform on ``[0, 1)``, ``phi`` uniform on ``[0, 2 pi)`` and ``F``
    uniform on ``(0, 4 pi]``, so every candidate passes validation. The
    sequence depends only on ``seed``, ``budget`` and ``shards``.
    """
    for e11, e22, e12, phi, action in _shards(config):
        for row in zip(e11.tolist(), e22.tolist(), e12.tolist(), phi.tolist(), action.tolist()):
            yield HamiltonianParams(*row[:4]), row[4]


def _batch_propagators(e11, e22, e12, phi, action):
    """Vectorized :func:`closed_form_propagator`; returns ``(u11, u12, u21, u22)``."""
    d = e11 - e22
    root = np.hypot(d, 2.0 * e12)
    degenerate = e12 < DEGENERATE_E12_RTOL * np.maximum(np.maximum(e11, e22), 1.0)
    safe = np.where(degenerate, 1.0, root)

    big = (safe + np.abs(d)) / (2.0 * safe)
    small = 2.0 * e12 * e12 / (safe * (safe + np.abs(d)))
    upper = np.where(degenerate, 1.0, np.where(d <= 0.0, big, small))
    lower = np.where(degenerate, 0.0, np.where(d <= 0.0, small, big))
    weight = np.where(degenerate, 0.0, e12 / safe)

    e1 = 0.5 * (e11 + e22 + root)
    e2 = np.maximum((e11 * e22 - e12 * e12) / np.where(e1 > 0.0, e1, 1.0), 0.0)
    e1 = np.where(degenerate, e22, e1)
    e2 = np.where(degenerate, e11, e2)

    x1 = np.exp(-1j * e1 * action)
    x2 = np.exp(-1j * e2 * action)
    off = weight * (x1 - x2)
    phase = np.exp(1j * phi)
    return upper * x1 + lower * x2, np.conj(phase) * off, phase * off, lower * x1 + upper * x2


def _batch_objectives(arrays, config: SearchConfig) -> tuple[np.ndarray, np.ndarray]:
    e11, e22, _, _, action = arrays
    u11, u12, u21, u22 = _batch_propagators(*arrays)
    product = action * np.maximum(e11, e22) / HALF_PI
    if config.kind == THETA:
        target = np.exp(-1j * config.theta)
        residual = np.sqrt(
            np.abs(u11) ** 2 + np.abs(u22) ** 2 + np.abs(u12 - target) ** 2 + np.abs(u21 - target) ** 2
        )
    else:
        c = math.cos(config.alpha)
        residual = np.maximum(np.abs(np.abs(u11) - c), np.abs(np.abs(u22) - c))
    return product, residual


# ── objectives ──────────────────────────────────────────────────── #


def _product(params: HamiltonianParams, action: float) -> float:
    return action * max(params.e11, params.e22) / HALF_PI


def _overlap_residual(U: Unitary2, alpha: float) -> float:
    c = math.cos(alpha)
    return max(abs(abs(U.u11) - c), abs(abs(U.u22) - c))


def evaluate_candidate(params: HamiltonianParams, F: float, theta: float) -> tuple[float, float]:
    """Return ``(normalized product, gate error)`` for the gate with phase *theta*.

    Raises:
        InvalidParamsError: If *params* fail validation.
        DomainExceededError: If *F* is negative.

    Example::

        evaluate_candidate(HamiltonianParams(1, 1, 0.5, math.pi), math.pi, math.pi / 2)
        # (2.0, ~1e-16)
    """
    require_valid(params)
    U = closed_form_propagator(params, F)
    return _product(params, F), gate_error(U, theta)


def evaluate_rotation(params: HamiltonianParams, F: float, alpha: float) -> tuple[float, float]:
    """Return ``(normalized product, overlap residual)`` for a rotation by *alpha*.

    The residual is ``| |<psi(F)|psi(0)>| - cos(alpha) |``, worst over the two
    basis states.
    """
    require_valid(params)
    U = closed_form_propagator(params, F)
    return _product(params, F), _overlap_residual(U, alpha)


class _Objective:
    """Scalar evaluation of ``(product, residual)`` with an evaluation counter."""

    def __init__(self, config: SearchConfig, evaluations: int = 0):
        self.config = config
        self.evaluations = evaluations
        if config.kind == THETA:
            target = gate_target(config.theta).as_array()
            self._residual = lambda U: float(np.linalg.norm(U.as_array() - target))
        else:
            self._residual = lambda U: _overlap_residual(U, config.alpha)

    def residual(self, params: HamiltonianParams, action: float) -> float:
        self.evaluations += 1
        return self._residual(closed_form_propagator(params, action))

    def point(self, x: Sequence[float]) -> Candidate | None:
        """Evaluate *x*; ``None`` when it leaves the constraint set."""
        params = HamiltonianParams(x[0], x[1], x[2], x[3])
        action = x[4]
        if not (math.isfinite(action) and action > 0.0) or not validate(params).accepted:
            return None
        return Candidate(params, action, _product(params, action), self.residual(params, action))

    def snap(self, x: list[float]) -> list[float]:
        """Re-tune ``F`` to minimize the residual near its current value."""
        params = HamiltonianParams(x[0], x[1], x[2], x[3])
        action = x[4]
        if not (math.isfinite(action) and action > 0.0) or not validate(params).accepted:
            return x
        result = optimize.minimize_scalar(
            lambda F: self.residual(params, F),
            bounds=(action / ACTION_WINDOW, action * ACTION_WINDOW),
            method="bounded",
            options={"xatol": 1e-10},
        )
        return [*x[:4], float(result.x)]

    def polish(self, start: Candidate) -> Candidate:
        """Nelder-Mead on the residual over all five coordinates, from *start*.

        Points outside the constraint set score :data:`OUTSIDE_RESIDUAL`. The
        simplex is rebuilt around each optimum up to :data:`POLISH_RESTARTS`
        times while the residual keeps dropping.
        """

        def residual(x: np.ndarray) -> float:
            candidate = self.point(x.tolist())
            return OUTSIDE_RESIDUAL if candidate is None else candidate.residual

        best = start
        for _ in range(POLISH_RESTARTS):
            result = optimize.minimize(
                residual,
                np.array(best.vector()),
                method="Nelder-Mead",
                options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": POLISH_MAXITER},
            )
            candidate = self.point(result.x.tolist())
            if candidate is None or candidate.residual >= best.residual:
                break
            best = candidate
        return best


def _descend(objective: _Objective, start: Candidate, mode: str) -> tuple[Candidate, list[float]]:
    """Coordinate descent over ``(e11, e22, e12, phi, F)`` with step halving.

    Each level runs up to ``sweeps`` sweeps and stops early after a sweep
    with no accepted move; steps halve between levels. In repair mode the
    residual is minimized and the descent stops once feasible; in refine
    mode the product is minimized over feasible points only.
    """
    config = objective.config
    x = start.vector()
    current = start
    scale = max(x[0], x[1]) or 1.0
    steps = [0.1 * scale, 0.1 * scale, 0.1 * scale, 0.2, 0.1 * x[4]]
    history = []

    def better(candidate: Candidate) -> bool:
        if mode == _REPAIR:
            return candidate.residual < current.residual
        return candidate.residual <= config.epsilon and candidate.product < current.product

    for _ in range(config.refine_iterations):
        for _ in range(config.sweeps):
            improved = False
            for i in range(5):
                for sign in (1.0, -1.0):
                    trial = list(x)
                    trial[i] += sign * steps[i]
                    if i != 4:
                        trial = objective.snap(trial)
                    candidate = objective.point(trial)
                    if candidate is not None and better(candidate):
                        x, current, improved = trial, candidate, True
                        break
            if not improved:
                break
            if mode == _REPAIR and current.residual <= config.epsilon:
                history.append(current.product)
                return current, history
        history.append(current.product)
        steps = [s * 0.5 for s in steps]
    return current, history


def _reference_vector(config: SearchConfig) -> list[float]:
    """The construction that saturates the bound."""
    if config.kind == THETA:
        gate = synthesize_gate(GateSpec(config.theta))
        p = gate.params
        return [p.e11, p.e22, p.e12, p.phi, gate.tau]
    return [1.0, 1.0, 1.0, 0.0, config.alpha]


def _degenerate_report(config: SearchConfig) -> BoundReport:
    logger.info("alpha = 0: no evolution needed, product 0")
    return BoundReport(
        kind=ALPHA,
        angle=0.0,
        bound=0.0,
        best_product=0.0,
        gap=0.0,
        best_params=HamiltonianParams(0.0, 0.0, 0.0, 0.0),
        best_action=0.0,
        gate_error=0.0,
        samples=0,
        evaluations=0,
        seed=config.seed,
        epsilon=config.epsilon,
        tolerance=undershoot_tolerance(config.epsilon),
        loose_fidelity=config.epsilon > LOOSE_EPSILON,
        degenerate=True,
    )


def _run(config: SearchConfig) -> BoundReport:
    if config.kind == ALPHA and config.alpha == 0.0:
        return _degenerate_report(config)
    if config.epsilon > LOOSE_EPSILON:
        logger.warning("epsilon=%g: loose-fidelity regime, products may undershoot", config.epsilon)

    # ── sampling ── #
    samples = 0
    feasible: list[tuple[float, float, list[float]]] = []
    near: list[tuple[float, float, list[float]]] = []
    for arrays in _shards(config):
        product, residual = _batch_objectives(arrays, config)
        columns = np.stack(arrays)
        samples += product.size
        ok = np.flatnonzero(residual <= config.epsilon)
        best_ok = ok[np.lexsort((residual[ok], product[ok]))][: config.refine_starts]
        feasible.extend((product[k], residual[k], columns[:, k].tolist()) for k in best_ok)
        bad = np.flatnonzero(residual > config.epsilon)
        best_bad = bad[np.lexsort((product[bad], residual[bad]))][: config.repair_starts]
        near.extend((residual[k], product[k], columns[:, k].tolist()) for k in best_bad)
    logger.info("sampled %d candidates, %d shard-best feasible", samples, len(feasible))

    objective = _Objective(config, evaluations=samples)
    pool = []
    for _, _, vector in sorted(feasible, key=lambda row: row[:2]):
        candidate = objective.point(vector)
        if candidate is not None and candidate.residual <= config.epsilon:
            pool.append(candidate)
    if config.inject_synthesized:
        pool.append(objective.point(_reference_vector(config)))

    # ── repair ── #
    for _, _, vector in sorted(near, key=lambda row: row[:2])[: config.repair_starts]:
        start = objective.point(vector)
        if start is None:
            continue
        repaired, _ = _descend(objective, start, _REPAIR)
        repaired = objective.polish(repaired)
        logger.debug("repair from residual %.3g ended at %.3g", start.residual, repaired.residual)
        if repaired.residual <= config.epsilon:
            pool.append(repaired)
    logger.info("feasible pool of %d after repair", len(pool))

    if not pool:
        raise NoFeasibleCandidateError(samples, config.epsilon)

    # ── refinement ── #
    pool.sort(key=lambda c: (c.product, c.residual))
    best = pool[0]
    levels = [math.inf] * config.refine_iterations
    for start in pool[: config.refine_starts]:
        refined, history = _descend(objective, start, _REFINE)
        for level, value in enumerate(history):
            levels[level] = min(levels[level], value)
        if (refined.product, refined.residual) < (best.product, best.residual):
            best = refined
    running = pool[0].product
    history = []
    for value in levels:
        running = min(running, value)
        history.append(running)

    bound = config.bound
    report = BoundReport(
        kind=config.kind,
        angle=config.angle,
        bound=bound,
        best_product=best.product,
        gap=best.product - bound,
        best_params=best.params,
        best_action=best.action,
        gate_error=best.residual,
        samples=samples,
        evaluations=objective.evaluations,
        seed=config.seed,
        epsilon=config.epsilon,
        tolerance=undershoot_tolerance(config.epsilon),
        loose_fidelity=config.epsilon > LOOSE_EPSILON,
        history=tuple(history),
    )
    logger.info(
        "%s=%g: best product %.6f vs bound %.6f (gap %+.3g)",
        config.kind,
        config.angle,
        report.best_product,
        bound,
        report.gap,
    )
    return report


def minimize_product(config: SearchConfig) -> BoundReport:
    """Search for the smallest normalized product realizing the gate.

    Raises:
        SearchConfigError: If *config* is a rotation config.
        NoFeasibleCandidateError: If no candidate ends within ``epsilon``.
    """
    if config.kind != THETA:
        raise SearchConfigError("minimize_product needs a theta config; use rotation_search")
    return _run(config)


def rotation_search(config: SearchConfig) -> BoundReport:
    """Search for the smallest normalized product realizing a rotation by ``alpha``.

    Feasibility is ``| |<psi(F)|psi(0)>| - cos(alpha) | <= epsilon`` for both
    basis states. ``alpha = 0`` returns a degenerate report without sampling.

    Raises:
        SearchConfigError: If *config* is a gate config.
        NoFeasibleCandidateError: If no candidate ends within ``epsilon``.
    """
    if config.kind != ALPHA:
        raise SearchConfigError("rotation_search needs an alpha config; use minimize_product")
    return _run(config)
