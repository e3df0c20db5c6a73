# speedlimitpy/cli.py
"""Command-line interface.

Subcommands:

* ``bound``        -- closed-form minimum times (natural or SI units);
* ``synthesize``   -- build a minimum-time gate, write its spec and report;
* ``simulate``     -- evolve a state under a spec, write a trajectory CSV;
* ``verify-bound`` -- stress-test the bound over a theta or alpha grid;
* ``sweep``        -- synthesize and verify gates over theta x energy.

Exit codes: 0 on success (gate saturates, no bound violation, every sweep
row saturates), 1 when a verification fails, 2 on usage or input errors.
Every file written gets a sibling ``<stem>.manifest.json``.

Example::

    speedlimitpy bound --theta 0 --energy 1
    speedlimitpy bound --wavelength 397e-9 --units si
    speedlimitpy synthesize --theta 1.5707963267948966 --out gate.json
    speedlimitpy simulate gate.json --state 1,0 --oracle --steps 8192
    speedlimitpy verify-bound --theta-grid 0:3.1:0.31 --seed 7 --out gaps.csv
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from functools import partial
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .__version__ import __version__
from .errors import NoFeasibleCandidateError, SpeedLimitError
from .hamiltonianjson import HamiltonianSpec
from .propagator import trajectory
from .qubitstate import NORM_TOLERANCE, QubitState
from .search import (
    CSV_COLUMNS,
    GAP_TOLERANCE,
    THETA,
    SearchConfig,
    minimize_product,
    rotation_search,
)
from .speedlimit import (
    HALF_PI,
    from_wavelength,
    gate_bound,
    min_gate_time,
    min_rotation_time,
    rotation_bound,
    to_natural_energy,
    to_si_energy,
)
from .synthesis import (
    DEFAULT_VERIFY_TOL,
    VALID_BRANCHES,
    GateSpec,
    synthesize_gate,
    verify_gate,
)

logger = logging.getLogger(__name__)

# ── Constants ────────────────────────────────────────────────────── #

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

#: Trajectory CSV columns; ``--oracle`` appends :data:`ORACLE_COLUMNS`.
TRAJECTORY_COLUMNS = ("t", "F", "re_a1", "im_a1", "re_a2", "im_a2", "energy")
ORACLE_COLUMNS = ("oracle_re_a1", "oracle_im_a1", "oracle_re_a2", "oracle_im_a2")

#: Saturation sweep CSV columns.
SWEEP_COLUMNS = ("theta", "energy", "tau", "bound", "product_normalized", "gate_error", "saturates")

#: Norm deviation below which a state is taken as is.
RENORMALIZE_THRESHOLD = 1e-12

#: Alpha grid values at most this far above pi/2 are snapped to pi/2.
ALPHA_SNAP = 1e-4


@dataclass(frozen=True)
class RunManifest:
    """Provenance record written next to every output file.

    Attributes:
        command (str): Subcommand name.
        arguments (dict[str, Any]): Normalized flag values.
        seed (int | None): Seed of search commands.
        version (str): speedlimitpy version.
        timestamp (str): ISO-8601 UTC time of the run.
    """

    command: str
    arguments: dict[str, Any]
    seed: int | None
    version: str = __version__
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunManifest":
        arguments = {
            key: str(value) if isinstance(value, Path) else value
            for key, value in sorted(vars(args).items())
            if key not in ("func", "verbose")
        }
        return cls(args.command, arguments, getattr(args, "seed", None))

    def write_for(self, path: Path) -> Path:
        """Write the manifest beside *path* and return its location."""
        target = path.with_suffix(".manifest.json")
        target.write_text(json.dumps(asdict(self), indent=2) + "\n", encoding="utf-8")
        return target


# ── parsing helpers ─────────────────────────────────────────────── #


def parse_grid(text: str) -> list[float]:
    """Parse ``start:stop:step`` (stop inclusive) or a comma list.

    Raises:
        argparse.ArgumentTypeError: If the grid is malformed or empty.
    """
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(part) for part in text.split(":"))
            if not step > 0.0:
                raise argparse.ArgumentTypeError(f"grid step must be > 0 in {text!r}")
            count = math.floor((stop - start) / step + 1e-9) + 1
            values = [start + k * step for k in range(max(count, 0))]
        else:
            values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}: {exc}") from exc
    if not values:
        raise argparse.ArgumentTypeError(f"grid {text!r} is empty")
    return values


def parse_state(text: str) -> QubitState:
    """Parse ``"a1,a2"`` with complex amplitudes such as ``"0,1j"``.

    Deviations from unit norm up to :data:`~speedlimitpy.qubitstate.NORM_TOLERANCE`
    are renormalized with a warning; larger ones raise.

    Raises:
        StateNormError: If the norm is off by more than the tolerance.
        ValueError: If the text is not two complex numbers.
    """
    parts = [p.strip().replace(" ", "") for p in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"state must be 'a1,a2', got {text!r}")
    state = QubitState(complex(parts[0]), complex(parts[1]))
    deviation = abs(state.norm() - 1.0)
    if deviation > NORM_TOLERANCE:
        state.require_normalized()
    if deviation > RENORMALIZE_THRESHOLD:
        logger.warning("state %s off unit norm by %.3g; renormalizing", text, deviation)
        state = state.normalized()
    return state


def _angles(values: Sequence[float], degrees: bool) -> list[float]:
    return [math.radians(v) if degrees else v for v in values]


def _snap_alphas(values: Sequence[float]) -> list[float]:
    out = []
    for value in values:
        if HALF_PI < value <= HALF_PI + ALPHA_SNAP:
            logger.warning("alpha %.17g snapped to pi/2", value)
            value = HALF_PI
        out.append(value)
    return out


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _write_csv(path: Path | None, columns: Sequence[str], rows, append: bool = False) -> None:
    """Write *rows* as CSV to *path*, or to stdout when *path* is None."""
    if path is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows([_fmt(v) for v in row] for row in rows)
        return
    header = not (append and path.exists() and path.stat().st_size > 0)
    with open(path, "a" if append else "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header:
            writer.writerow(columns)
        writer.writerows([_fmt(v) for v in row] for row in rows)


def _map(fn: Callable, items: Sequence, jobs: int) -> list:
    """Apply *fn* over *items* in up to *jobs* processes; results keep input order.

    *fn* must be picklable (a module-level function or a ``partial`` of one).
    """
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


def _search_cell(config: SearchConfig):
    """One verify-bound grid point; ``None`` when nothing feasible was found."""
    run = minimize_product if config.kind == THETA else rotation_search
    try:
        return run(config)
    except NoFeasibleCandidateError as exc:
        logger.warning("%s=%g: %s", config.kind, config.angle, exc)
        return None


def _sweep_cell(cell: tuple[float, float], tol: float) -> tuple:
    """Synthesize and verify one ``(theta, energy)`` cell as a sweep CSV row."""
    theta, energy = cell
    gate = synthesize_gate(GateSpec(theta, energy))
    report = verify_gate(gate.params, gate.pulse, gate.tau, theta, tol)
    return (
        theta,
        energy,
        report.tau,
        report.bound,
        report.product_normalized,
        report.gate_error,
        report.saturates,
    )


# ── subcommands ─────────────────────────────────────────────────── #


def cmd_bound(args: argparse.Namespace) -> int:
    if args.wavelength is None and (args.theta is None) == (args.alpha is None):
        raise SpeedLimitError("give exactly one of --theta and --alpha, or --wavelength")
    if args.wavelength is not None and args.alpha is not None:
        raise SpeedLimitError("--wavelength cannot be combined with --alpha")

    theta = None if args.theta is None else _angles([args.theta], args.degrees)[0]
    alpha = None if args.alpha is None else _angles([args.alpha], args.degrees)[0]

    if args.wavelength is not None:
        energy_si, _ = from_wavelength(args.wavelength)
        energy = to_natural_energy(energy_si)
        theta = theta or 0.0
    elif args.units == "si":
        energy_si = args.energy
        energy = to_natural_energy(args.energy)
    else:
        energy = args.energy
        energy_si = to_si_energy(args.energy)

    if alpha is not None:
        tau, bound = min_rotation_time(alpha, energy), rotation_bound(alpha)
    else:
        tau, bound = min_gate_time(theta, energy), gate_bound(theta)

    result = {
        "theta": theta,
        "alpha": alpha,
        "units": args.units,
        "energy": energy_si if args.units == "si" else energy,
        "tau": tau,
        "bound": bound,
    }
    if args.wavelength is not None:
        result["wavelength"] = args.wavelength
    if args.json:
        print(json.dumps(result, indent=2))
    else:
        energy_unit, time_unit = ("J", "s") if args.units == "si" else ("1/hbar", "")
        print(f"tau={_fmt(tau)} {time_unit}".rstrip())
        print(f"energy={_fmt(result['energy'])} {energy_unit}")
        print(f"bound={_fmt(bound)} (h/4 units)")
    return EXIT_OK


def cmd_synthesize(args: argparse.Namespace) -> int:
    theta = _angles([args.theta], args.degrees)[0]
    gate = synthesize_gate(GateSpec(theta, args.energy, args.branch))
    report = verify_gate(gate.params, gate.pulse, gate.tau, theta, args.tol)

    manifest = RunManifest.from_args(args)
    out = Path(args.out)
    HamiltonianSpec.from_model(gate.params, gate.timed_pulse()).write(out)
    manifest.write_for(out)
    print(f"  ✔ wrote spec → {out}")

    report_path = Path(args.report) if args.report else out.with_suffix(".report.json")
    report_path.write_text(report.to_json() + "\n", encoding="utf-8")
    manifest.write_for(report_path)
    print(f"  ✔ wrote report → {report_path}")

    print(report.to_json())
    print(f"branch={gate.branch} tau={_fmt(gate.tau)} saturates={_fmt(report.saturates)}")
    return EXIT_OK if report.saturates else EXIT_FAILED


def cmd_simulate(args: argparse.Namespace) -> int:
    spec = HamiltonianSpec.read(args.spec)
    psi0 = parse_state(args.state)
    t = spec.pulse.duration if args.t is None else args.t
    if t is None:
        raise SpeedLimitError("open-ended pulse: pass --t")

    times = [0.0] if t == 0.0 else np.linspace(0.0, t, args.points).tolist()
    record = trajectory(
        spec.params, spec.pulse, times, psi0, oracle_steps=args.steps if args.oracle else None
    )

    columns = TRAJECTORY_COLUMNS + (ORACLE_COLUMNS if args.oracle else ())
    rows = []
    for k, (time, state) in enumerate(zip(record.times, record.states)):
        row = [
            time,
            record.actions[k],
            state.a1.real,
            state.a1.imag,
            state.a2.real,
            state.a2.imag,
            record.energies[k],
        ]
        if args.oracle:
            o = record.oracle_states[k]
            row += [o.a1.real, o.a1.imag, o.a2.real, o.a2.imag]
        rows.append(row)

    out = Path(args.out) if args.out else None
    _write_csv(out, columns, rows)
    summary = sys.stdout if out else sys.stderr
    if out:
        RunManifest.from_args(args).write_for(out)
        print(f"  ✔ wrote trajectory → {out}")
    print(f"energy drift: {_fmt(record.energy_drift)}", file=summary)
    if args.oracle:
        print(
            f"max oracle deviation: {_fmt(record.max_oracle_deviation)} "
            f"(rk4, {args.steps} steps)",
            file=summary,
        )
    return EXIT_OK


def cmd_verify_bound(args: argparse.Namespace) -> int:
    if args.theta_grid is not None:
        grid = _angles(args.theta_grid, args.degrees)
        configs = [
            SearchConfig.for_gate(
                theta,
                epsilon=args.epsilon,
                budget=args.budget,
                refine_iterations=args.refine_iterations,
                seed=args.seed,
            )
            for theta in grid
        ]
    else:
        grid = _snap_alphas(_angles(args.alpha_grid, args.degrees))
        configs = [
            SearchConfig.for_rotation(
                alpha,
                epsilon=args.epsilon,
                budget=args.budget,
                refine_iterations=args.refine_iterations,
                seed=args.seed,
            )
            for alpha in grid
        ]

    reports = _map(_search_cell, configs, args.jobs)
    done = [r for r in reports if r is not None]

    out = Path(args.out) if args.out else None
    _write_csv(out, CSV_COLUMNS, [r.csv_row() for r in done], append=args.append)
    summary = sys.stdout if out else sys.stderr
    if out:
        RunManifest.from_args(args).write_for(out)
        print(f"  ✔ wrote {len(done)} rows → {out}")
    if args.json:
        path = Path(args.json)
        path.write_text(json.dumps([r.to_dict() for r in done], indent=2) + "\n", encoding="utf-8")
        RunManifest.from_args(args).write_for(path)
        print(f"  ✔ wrote reports → {path}", file=summary)

    exhausted = len(reports) - len(done)
    if exhausted:
        print(f"budget exhausted without a feasible candidate at {exhausted} grid points", file=summary)
    if not done:
        return EXIT_FAILED
    min_gap = min(r.gap for r in done)
    loose = " (loose-fidelity regime)" if any(r.loose_fidelity for r in done) else ""
    print(f"min gap: {_fmt(min_gap)} over {len(done)} points{loose}", file=summary)
    return EXIT_OK if min_gap >= -GAP_TOLERANCE else EXIT_FAILED


def cmd_sweep(args: argparse.Namespace) -> int:
    thetas = _angles(args.theta_grid, args.degrees)
    cells = [(theta, energy) for theta in thetas for energy in args.energies]

    rows = _map(partial(_sweep_cell, tol=args.tol), cells, args.jobs)
    out = Path(args.out) if args.out else None
    _write_csv(out, SWEEP_COLUMNS, rows, append=args.append)
    summary = sys.stdout if out else sys.stderr
    if out:
        RunManifest.from_args(args).write_for(out)
        print(f"  ✔ wrote {len(rows)} rows → {out}")
    failed = sum(1 for row in rows if not row[-1])
    print(f"{len(rows) - failed}/{len(rows)} gates saturate the bound", file=summary)
    return EXIT_OK if failed == 0 else EXIT_FAILED


# ── parser ──────────────────────────────────────────────────────── #


def _energies(text: str) -> list[float]:
    values = parse_grid(text)
    if any(not v > 0.0 for v in values):
        raise argparse.ArgumentTypeError(f"energies must be > 0, got {text!r}")
    return values


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="speedlimitpy",
        description="Quantum speed limits of a driven qubit: bounds, gate synthesis, "
        "exact simulation and bound stress tests.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO logging, -vv for DEBUG."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="Closed-form minimum times.")
    p.add_argument("--theta", type=float, help="Gate phase shift.")
    p.add_argument("--alpha", type=float, help="Rotation angle in [0, pi/2].")
    p.add_argument("--energy", type=float, default=1.0, help="Average energy (1/hbar, or J with --units si).")
    p.add_argument("--units", choices=("natural", "si"), default="natural")
    p.add_argument("--wavelength", type=float, help="Transition wavelength in metres (CODATA h, c).")
    p.add_argument("--degrees", action="store_true", help="Angles are in degrees.")
    p.add_argument("--json", action="store_true", help="Print JSON instead of text.")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("synthesize", help="Build a minimum-time gate.")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--energy", type=float, default=1.0)
    p.add_argument("--branch", choices=sorted(VALID_BRANCHES), default="auto")
    p.add_argument("--tol", type=float, default=DEFAULT_VERIFY_TOL)
    p.add_argument("--out", required=True, help="Hamiltonian spec JSON to write.")
    p.add_argument("--report", help="Report JSON path (default: <out stem>.report.json).")
    p.add_argument("--degrees", action="store_true")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("simulate", help="Evolve a state and write a trajectory CSV.")
    p.add_argument("spec", help="Hamiltonian spec JSON.")
    p.add_argument("--t", type=float, help="Final time (default: end of the pulse).")
    p.add_argument("--state", default="1,0", help="Initial amplitudes 'a1,a2' (default 1,0).")
    p.add_argument("--points", type=_positive_int, default=101, help="Rows for t > 0.")
    p.add_argument("--oracle", action="store_true", help="Add RK4 oracle columns.")
    p.add_argument("--steps", type=_positive_int, default=8192, help="RK4 steps.")
    p.add_argument("--out", help="CSV path (default: stdout).")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-bound", help="Stress-test the bound over a grid.")
    grid = p.add_mutually_exclusive_group(required=True)
    grid.add_argument("--theta-grid", type=parse_grid, help="start:stop:step or a,b,c")
    grid.add_argument("--alpha-grid", type=parse_grid, help="start:stop:step or a,b,c")
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--budget", type=_positive_int, default=100_000)
    p.add_argument("--refine-iterations", type=_positive_int, default=8)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jobs", type=_positive_int, default=1, help="Worker processes for grid points.")
    p.add_argument("--out", help="CSV path (default: stdout).")
    p.add_argument("--append", action="store_true", help="Append rows to an existing CSV.")
    p.add_argument("--json", help="Also write the full reports to this JSON path.")
    p.add_argument("--degrees", action="store_true")
    p.set_defaults(func=cmd_verify_bound)

    p = sub.add_parser("sweep", help="Synthesize and verify gates over theta x energy.")
    p.add_argument("--theta-grid", type=parse_grid, required=True)
    p.add_argument("--energies", type=_energies, default=[1.0])
    p.add_argument("--tol", type=float, default=DEFAULT_VERIFY_TOL)
    p.add_argument("--jobs", type=_positive_int, default=1, help="Worker processes for sweep cells.")
    p.add_argument("--out", help="CSV path (default: stdout).")
    p.add_argument("--append", action="store_true")
    p.add_argument("--degrees", action="store_true")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (SpeedLimitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
