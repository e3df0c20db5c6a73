"""
Tests for the speedlimitpy command-line interface.

Every subcommand is driven through ``main(argv)`` with output captured by
pytest's ``capsys`` and files written under ``tmp_path``.
"""

import argparse
import csv
import json
import math

import pytest

from speedlimitpy.cli import (
    EXIT_FAILED,
    EXIT_OK,
    EXIT_USAGE,
    SWEEP_COLUMNS,
    TRAJECTORY_COLUMNS,
    main,
    parse_grid,
    parse_state,
)
from speedlimitpy.propagator import Unitary2
from speedlimitpy.qubitstate import QubitState
from speedlimitpy.search import CSV_COLUMNS
from speedlimitpy.synthesis import gate_error

HALF_PI_TEXT = repr(math.pi / 2)


def _rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


class TestParsers:
    """Grid and state parsing."""

    def test_range_grid(self):
        """Test start:stop:step includes the stop value."""
        assert parse_grid("0:1:0.25") == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])

    def test_list_grid(self):
        """Test a comma list."""
        assert parse_grid("1, 2,3") == [1.0, 2.0, 3.0]

    def test_bad_grids(self):
        """Test empty and malformed grids."""
        for text in ("1:0:0.1", "0:1:0", "a,b", ""):
            with pytest.raises(argparse.ArgumentTypeError):
                parse_grid(text)

    def test_state(self):
        """Test complex amplitudes are parsed."""
        assert parse_state("0,1j") == QubitState(0, 1j)
        assert parse_state("1, 0") == QubitState(1, 0)

    def test_state_renormalized(self):
        """Test a tiny norm deviation is renormalized."""
        state = parse_state("1.0000000001,0")
        assert state.norm() == pytest.approx(1.0, abs=1e-15)


class TestBound:
    """The bound subcommand."""

    def test_theta_json(self, capsys):
        """Test the phase-free gate at unit energy."""
        assert main(["bound", "--theta", "0", "--energy", "1", "--json"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["tau"] == pytest.approx(math.pi / 2)
        assert data["bound"] == 1.0

    def test_degrees(self, capsys):
        """Test angles given in degrees."""
        assert main(["bound", "--theta", "270", "--degrees", "--json"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["tau"] == pytest.approx(math.pi)

    def test_alpha_text(self, capsys):
        """Test the rotation bound in text form."""
        assert main(["bound", "--alpha", repr(math.pi / 4)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "bound=0.5 " in out
        assert "tau=0.78539816339744828" in out

    def test_wavelength(self, capsys):
        """Test the calcium transition in SI units."""
        assert main(["bound", "--wavelength", "397e-9", "--units", "si", "--json"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["tau"] == pytest.approx(6.62e-16, rel=5e-3)
        assert data["energy"] == pytest.approx(2.50e-19, rel=5e-3)

    def test_usage_errors(self, capsys):
        """Test conflicting or invalid inputs exit with 2."""
        assert main(["bound"]) == EXIT_USAGE
        assert main(["bound", "--theta", "0", "--alpha", "0.1"]) == EXIT_USAGE
        assert main(["bound", "--alpha", "2"]) == EXIT_USAGE
        assert main(["bound", "--theta", "0", "--energy", "0"]) == EXIT_USAGE
        assert "error:" in capsys.readouterr().err

    def test_version(self, capsys):
        """Test --version exits cleanly."""
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "speedlimitpy" in capsys.readouterr().out


class TestSynthesize:
    """The synthesize subcommand."""

    def test_writes_spec_report_and_manifests(self, tmp_path, capsys):
        """Test the theta = pi/2 gate saturates and every file is written."""
        out = tmp_path / "gate.json"
        assert main(["synthesize", "--theta", HALF_PI_TEXT, "--out", str(out)]) == EXIT_OK
        spec = json.loads(out.read_text())
        assert spec["e12"] == 0.5
        assert spec["pulse"]["type"] == "constant"

        report = json.loads((tmp_path / "gate.report.json").read_text())
        assert report["saturates"] is True
        assert report["product_normalized"] == pytest.approx(2.0)

        manifest = json.loads((tmp_path / "gate.manifest.json").read_text())
        assert manifest["command"] == "synthesize"
        assert manifest["seed"] is None
        assert (tmp_path / "gate.report.manifest.json").exists()
        assert "saturates=true" in capsys.readouterr().out

    def test_custom_report_path(self, tmp_path):
        """Test --report overrides the default report location."""
        out, report = tmp_path / "g.json", tmp_path / "r.json"
        assert main(["synthesize", "--theta", "0", "--out", str(out), "--report", str(report)]) == EXIT_OK
        assert json.loads(report.read_text())["bound"] == 1.0

    def test_slow_branch_fails(self, tmp_path):
        """Test a forced plus branch above pi does not saturate."""
        argv = ["synthesize", "--theta", repr(3 * math.pi / 2), "--branch", "plus",
                "--out", str(tmp_path / "g.json")]
        assert main(argv) == EXIT_FAILED

    def test_inadmissible_branch(self, tmp_path, capsys):
        """Test the minus branch below pi is a usage error."""
        argv = ["synthesize", "--theta", "1", "--branch", "minus", "--out", str(tmp_path / "g.json")]
        assert main(argv) == EXIT_USAGE
        assert "minus branch" in capsys.readouterr().err


class TestSimulate:
    """The simulate subcommand."""

    def test_trajectory_with_oracle(self, not_gate_spec_file, tmp_path, capsys):
        """Test the NOT gate trajectory ends in the second basis state."""
        out = tmp_path / "traj.csv"
        argv = ["simulate", str(not_gate_spec_file), "--points", "11", "--oracle",
                "--steps", "2048", "--out", str(out)]
        assert main(argv) == EXIT_OK
        rows = _rows(out)
        assert tuple(rows[0][:7]) == TRAJECTORY_COLUMNS
        assert len(rows[0]) == 11
        assert len(rows) == 12
        last = [float(v) for v in rows[-1]]
        assert last[0] == pytest.approx(math.pi / 2)
        assert abs(complex(last[2], last[3])) < 1e-12
        assert complex(last[4], last[5]) == pytest.approx(1.0, abs=1e-12)
        assert complex(last[7], last[8]) == pytest.approx(0.0, abs=1e-8)

        printed = capsys.readouterr().out
        assert "energy drift:" in printed
        assert "max oracle deviation:" in printed
        assert (tmp_path / "traj.manifest.json").exists()

    def test_stdout(self, not_gate_spec_file, capsys):
        """Test the CSV goes to stdout and the summary to stderr."""
        assert main(["simulate", str(not_gate_spec_file), "--state", "0,1", "--points", "3"]) == EXIT_OK
        captured = capsys.readouterr()
        lines = captured.out.strip().splitlines()
        assert len(lines) == 4
        assert lines[0].startswith("t,F,")
        assert "energy drift:" in captured.err

    def test_zero_time(self, not_gate_spec_file, capsys):
        """Test t = 0 gives the single initial row."""
        assert main(["simulate", str(not_gate_spec_file), "--t", "0"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        assert lines[1].split(",")[2] == "1"

    def test_unnormalized_state(self, not_gate_spec_file, capsys):
        """Test a state far from unit norm is rejected."""
        assert main(["simulate", str(not_gate_spec_file), "--state", "1,1"]) == EXIT_USAGE
        assert "norm" in capsys.readouterr().err

    def test_bad_spec(self, tmp_path, capsys):
        """Test spec errors report the field and its position."""
        path = tmp_path / "bad.json"
        path.write_text(
            '{"e11": 1, "e22": 1, "e12": 0, "phi": 0,\n'
            ' "pulse": {"type": "constant", "value": 1}, "extra": 1}\n'
        )
        assert main(["simulate", str(path)]) == EXIT_USAGE
        err = capsys.readouterr().err
        assert "line 2" in err
        assert "extra" in err

    def test_past_pulse_end(self, not_gate_spec_file):
        """Test a final time beyond the pulse is rejected."""
        assert main(["simulate", str(not_gate_spec_file), "--t", "5"]) == EXIT_USAGE

    def test_round_trip_from_synthesize(self, tmp_path):
        """Test a synthesized spec file reproduces its gate at t = tau."""
        theta = math.pi / 2
        spec = tmp_path / "gate.json"
        assert main(["synthesize", "--theta", repr(theta), "--out", str(spec)]) == EXIT_OK

        columns = []
        for state in ("1,0", "0,1"):
            out = tmp_path / f"traj_{state.replace(',', '')}.csv"
            assert main(["simulate", str(spec), "--state", state, "--points", "5",
                         "--out", str(out)]) == EXIT_OK
            last = [float(v) for v in _rows(out)[-1]]
            assert last[0] == pytest.approx(math.pi, abs=1e-12)
            columns.append((complex(last[2], last[3]), complex(last[4], last[5])))

        (u11, u21), (u12, u22) = columns
        assert gate_error(Unitary2(u11, u12, u21, u22), theta) <= 1e-9

    def test_csv_byte_stable(self, not_gate_spec_file, tmp_path):
        """Test identical runs write identical trajectory files."""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (first, second):
            argv = ["simulate", str(not_gate_spec_file), "--points", "7", "--oracle",
                    "--steps", "512", "--out", str(out)]
            assert main(argv) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()


class TestVerifyBound:
    """The verify-bound subcommand."""

    ARGS = ["--seed", "7", "--budget", "400", "--refine-iterations", "1"]

    def test_theta_grid(self, tmp_path, capsys):
        """Test a two-point grid passes and appends without a second header."""
        out = tmp_path / "gaps.csv"
        argv = ["verify-bound", "--theta-grid", f"0,{HALF_PI_TEXT}", *self.ARGS, "--out", str(out)]
        assert main(argv) == EXIT_OK
        assert "min gap:" in capsys.readouterr().out
        rows = _rows(out)
        assert tuple(rows[0]) == CSV_COLUMNS
        assert len(rows) == 3
        assert [r[0] for r in rows[1:]] == ["theta", "theta"]
        assert float(rows[2][3]) == pytest.approx(2.0, abs=0.05)

        assert main([*argv, "--append"]) == EXIT_OK
        rows = _rows(out)
        assert len(rows) == 5
        assert rows.count(list(CSV_COLUMNS)) == 1

        manifest = json.loads((tmp_path / "gaps.manifest.json").read_text())
        assert manifest["seed"] == 7
        assert manifest["command"] == "verify-bound"

    def test_alpha_grid_json(self, tmp_path, capsys):
        """Test a rotation grid with full JSON reports."""
        reports = tmp_path / "reports.json"
        argv = ["verify-bound", "--alpha-grid", "0,45", "--degrees", *self.ARGS, "--json", str(reports)]
        assert main(argv) == EXIT_OK
        data = json.loads(reports.read_text())
        assert [r["degenerate"] for r in data] == [True, False]
        assert data[1]["bound"] == pytest.approx(0.5)
        assert "min gap:" in capsys.readouterr().err

    def test_alpha_grid_snaps_top_value(self, tmp_path, caplog):
        """Test a grid ending just above pi/2 gives five rows ending at pi/2."""
        out = tmp_path / "alpha.csv"
        argv = ["verify-bound", "--alpha-grid", "0:1.5708:0.3927", *self.ARGS, "--out", str(out)]
        assert main(argv) == EXIT_OK
        rows = _rows(out)[1:]
        assert len(rows) == 5
        assert [r[0] for r in rows] == ["alpha"] * 5
        assert float(rows[-1][1]) == math.pi / 2
        assert float(rows[-1][2]) == 1.0
        assert "snapped to pi/2" in caplog.text

    def test_csv_byte_stable(self, tmp_path):
        """Test identical seeded runs write identical CSV files."""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (first, second):
            argv = ["verify-bound", "--theta-grid", "0,1", *self.ARGS, "--out", str(out)]
            assert main(argv) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()

    def test_jobs_keep_grid_order(self, tmp_path):
        """Test worker processes write the same rows as a serial run."""
        serial, parallel = tmp_path / "serial.csv", tmp_path / "parallel.csv"
        for out, jobs in ((serial, "1"), (parallel, "2")):
            argv = ["verify-bound", "--theta-grid", "0,1,2", *self.ARGS, "--jobs", jobs,
                    "--out", str(out)]
            assert main(argv) == EXIT_OK
        assert serial.read_bytes() == parallel.read_bytes()

    @pytest.mark.slow
    def test_full_theta_grid(self, tmp_path):
        """Test the eleven-point grid at the default budget never undershoots."""
        out = tmp_path / "gaps.csv"
        argv = ["verify-bound", "--theta-grid", "0:3.1:0.31", "--seed", "7", "--out", str(out)]
        assert main(argv) == EXIT_OK
        rows = _rows(out)[1:]
        assert len(rows) == 11
        assert all(float(r[4]) >= -0.05 for r in rows)

    def test_usage(self, capsys):
        """Test a missing seed, empty grid or both grids exit with 2."""
        for argv in (
            ["verify-bound", "--theta-grid", "0"],
            ["verify-bound", "--theta-grid", "1:0:0.1", "--seed", "1"],
            ["verify-bound", "--theta-grid", "0", "--alpha-grid", "0", "--seed", "1"],
        ):
            with pytest.raises(SystemExit) as exc:
                main(argv)
            assert exc.value.code == 2


class TestSweep:
    """The sweep subcommand."""

    def test_all_saturate(self, tmp_path, capsys):
        """Test a theta x energy grid saturates everywhere."""
        out = tmp_path / "sweep.csv"
        argv = ["sweep", "--theta-grid", "0:3:1", "--energies", "0.5,1,2", "--jobs", "2",
                "--out", str(out)]
        assert main(argv) == EXIT_OK
        rows = _rows(out)
        assert tuple(rows[0]) == SWEEP_COLUMNS
        assert len(rows) == 13
        assert all(row[-1] == "true" for row in rows[1:])
        assert [float(r[0]) for r in rows[1::3]] == [0.0, 1.0, 2.0, 3.0]
        assert "12/12 gates saturate" in capsys.readouterr().out

    def test_bad_energy(self):
        """Test non-positive energies are a usage error."""
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--theta-grid", "0", "--energies", "0,1"])
        assert exc.value.code == 2
