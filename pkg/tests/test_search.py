"""
Tests for the bound stress-test search.

Fast tests use small budgets and short descents; the full-budget runs are
marked ``slow``.
"""

import json
import math
import unittest

import numpy as np
import pytest

from speedlimitpy.errors import NoFeasibleCandidateError, SearchConfigError
from speedlimitpy.hamiltonian import HamiltonianParams, validate
from speedlimitpy.search import (
    CSV_COLUMNS,
    MAX_ACTION,
    SearchConfig,
    _batch_objectives,
    _descend,
    _Objective,
    _REFINE,
    _REPAIR,
    _shards,
    evaluate_candidate,
    evaluate_rotation,
    minimize_product,
    rotation_search,
    sample_candidates,
    undershoot_tolerance,
)
from speedlimitpy.speedlimit import gate_bound
from speedlimitpy.synthesis import GateSpec, synthesize_gate

#: Settings that keep a full run well under a second.
QUICK = dict(budget=2000, refine_iterations=2, sweeps=2, refine_starts=1, repair_starts=1)


class TestSearchConfig(unittest.TestCase):
    """Test configuration validation."""

    def test_builders(self):
        """Test gate and rotation configs and their bounds."""
        gate = SearchConfig.for_gate(math.pi / 2)
        self.assertEqual(gate.kind, "theta")
        self.assertEqual(gate.angle, math.pi / 2)
        self.assertAlmostEqual(gate.bound, 2.0, places=15)
        rotation = SearchConfig.for_rotation(math.pi / 4)
        self.assertEqual(rotation.kind, "alpha")
        self.assertEqual(rotation.bound, 0.5)

    def test_defaults(self):
        """Test the documented defaults."""
        config = SearchConfig.for_gate(0.0)
        self.assertEqual(config.epsilon, 1e-3)
        self.assertEqual(config.refine_iterations, 8)
        self.assertEqual(config.sweeps, 5)

    def test_rejects(self):
        """Test out-of-range fields raise SearchConfigError."""
        bad = [
            dict(),
            dict(theta=0.0, alpha=0.5),
            dict(theta=-1.0),
            dict(alpha=2.0),
            dict(theta=0.0, epsilon=0.0),
            dict(theta=0.0, epsilon=0.5),
            dict(theta=0.0, budget=0),
            dict(theta=0.0, refine_iterations=0),
            dict(theta=0.0, sweeps=True),
            dict(theta=0.0, seed=1.5),
            dict(theta=0.0, repair_starts=-1),
        ]
        for kwargs in bad:
            with self.assertRaises(SearchConfigError, msg=str(kwargs)):
                SearchConfig(**kwargs)
        self.assertIsInstance(SearchConfigError("x"), ValueError)

    def test_tolerance_function(self):
        """Test the undershoot tolerance grows with epsilon."""
        self.assertEqual(undershoot_tolerance(1e-3), 0.05)
        self.assertEqual(undershoot_tolerance(0.4), 20.0)


class TestSampling(unittest.TestCase):
    """Test sample_candidates."""

    def test_reproducible(self):
        """Test seed 42 yields the same ten candidates every time."""
        config = SearchConfig.for_gate(0.0, budget=10, seed=42)
        first = list(sample_candidates(config))
        self.assertEqual(len(first), 10)
        self.assertEqual(first, list(sample_candidates(config)))

    def test_seed_sensitive(self):
        """Test different seeds give different sequences."""
        a = list(sample_candidates(SearchConfig.for_gate(0.0, budget=10, seed=42)))
        b = list(sample_candidates(SearchConfig.for_gate(0.0, budget=10, seed=43)))
        self.assertNotEqual(a, b)

    def test_all_valid(self):
        """Test every candidate passes validation and F lies in (0, 4 pi]."""
        for seed in (0, 1, 2**63, -5):
            config = SearchConfig.for_gate(0.0, budget=500, seed=seed, shards=3)
            for params, action in sample_candidates(config):
                self.assertTrue(validate(params).accepted, params)
                self.assertGreater(action, 0.0)
                self.assertLessEqual(action, MAX_ACTION)

    def test_covers_parameter_space(self):
        """Test asymmetric energies and the full phase range are drawn."""
        samples = list(sample_candidates(SearchConfig.for_gate(0.0, budget=2000, seed=3)))
        phis = [p.phi for p, _ in samples]
        self.assertLess(min(phis), 0.1)
        self.assertGreater(max(phis), 2 * math.pi - 0.1)
        self.assertTrue(any(abs(p.e11 - p.e22) > 0.5 for p, _ in samples))

    def test_budget_smaller_than_shards(self):
        """Test the budget is honored when it is below the shard count."""
        config = SearchConfig.for_gate(0.0, budget=3, shards=8)
        self.assertEqual(len(list(sample_candidates(config))), 3)


class TestEvaluate(unittest.TestCase):
    """Test the scalar and batch objectives."""

    def test_examples(self):
        """Test the saturating gates and a quarter-cycle miss."""
        gate = synthesize_gate(GateSpec(theta=0.0))
        product, error = evaluate_candidate(gate.params, math.pi / 2, 0.0)
        self.assertAlmostEqual(product, 1.0, places=15)
        self.assertLessEqual(error, 1e-12)

        product, error = evaluate_candidate(HamiltonianParams(1, 1, 0.5, math.pi), math.pi, math.pi / 2)
        self.assertAlmostEqual(product, 2.0, places=15)
        self.assertLessEqual(error, 1e-12)

        _, error = evaluate_candidate(HamiltonianParams(1, 1, 1, 0), math.pi / 4, 0.0)
        self.assertAlmostEqual(error, math.sqrt(6.0), places=12)

    def test_rotation_examples(self):
        """Test the swap drive realizes alpha = pi/4 and pi/2 at the bound."""
        params = HamiltonianParams(1, 1, 1, 0)
        product, residual = evaluate_rotation(params, math.pi / 4, math.pi / 4)
        self.assertAlmostEqual(product, 0.5, places=15)
        self.assertLess(residual, 1e-12)
        product, residual = evaluate_rotation(params, math.pi / 2, math.pi / 2)
        self.assertAlmostEqual(product, 1.0, places=15)
        self.assertLess(residual, 1e-12)

    def test_synthesized_gates_at_bound(self):
        """Test injected gates evaluate to the bound within 1e-9."""
        for theta in np.linspace(0.0, 2 * math.pi, 13):
            gate = synthesize_gate(GateSpec(theta=theta))
            product, error = evaluate_candidate(gate.params, gate.tau, theta)
            self.assertAlmostEqual(product, gate_bound(theta), delta=1e-9)
            self.assertLessEqual(error, 1e-9)

    def test_batch_matches_scalar(self):
        """Test the vectorized objective agrees with the scalar one."""
        for config in (SearchConfig.for_gate(1.0, budget=300, shards=1, seed=5),
                       SearchConfig.for_rotation(0.7, budget=300, shards=1, seed=5)):
            product, residual = _batch_objectives(next(_shards(config)), config)
            evaluate = evaluate_candidate if config.kind == "theta" else evaluate_rotation
            for k, (params, action) in enumerate(sample_candidates(config)):
                p, r = evaluate(params, action, config.angle)
                self.assertAlmostEqual(product[k], p, delta=1e-12)
                self.assertAlmostEqual(residual[k], r, delta=1e-10)


class TestDescent(unittest.TestCase):
    """Test the coordinate-descent phases directly."""

    def test_repair_reduces_residual(self):
        """Test repair improves a drive with a detuned phase."""
        objective = _Objective(SearchConfig.for_gate(0.0, refine_iterations=3, sweeps=3))
        start = objective.point([1.0, 1.0, 1.0, math.pi - 0.2, 1.6])
        repaired, _ = _descend(objective, start, _REPAIR)
        self.assertLess(repaired.residual, start.residual)

    def test_polish_reaches_feasible_set(self):
        """Test repair and the Nelder-Mead polish carry a detuned drive into the feasible set."""
        config = SearchConfig.for_gate(math.pi / 2)
        objective = _Objective(config)
        start = objective.point([1.0, 1.0, 0.5, math.pi - 0.2, math.pi - 0.1])
        self.assertGreater(start.residual, config.epsilon)
        repaired, _ = _descend(objective, start, _REPAIR)
        polished = objective.polish(repaired)
        self.assertLessEqual(polished.residual, repaired.residual)
        self.assertLessEqual(polished.residual, config.epsilon)
        self.assertTrue(validate(polished.params).accepted)
        self.assertGreaterEqual(polished.product, gate_bound(math.pi / 2) - 0.05)

    def test_polish_never_worsens(self):
        """Test polishing a feasible point keeps it feasible."""
        objective = _Objective(SearchConfig.for_gate(0.0))
        start = objective.point([1.0, 1.0, 1.0, math.pi, math.pi / 2])
        self.assertLessEqual(objective.polish(start).residual, start.residual)

    def test_refine_keeps_feasibility(self):
        """Test refinement never leaves the feasible set or raises the product."""
        config = SearchConfig.for_gate(math.pi / 2, refine_iterations=3, sweeps=2)
        objective = _Objective(config)
        gate = synthesize_gate(GateSpec(theta=math.pi / 2))
        start = objective.point([1.0, 1.0, 0.5, math.pi, gate.tau])
        refined, history = _descend(objective, start, _REFINE)
        self.assertLessEqual(refined.residual, config.epsilon)
        self.assertLessEqual(refined.product, start.product)
        self.assertEqual(len(history), 3)
        self.assertTrue(all(b <= a for a, b in zip(history, history[1:])))
        self.assertGreater(objective.evaluations, 0)


class TestSearchRuns(unittest.TestCase):
    """Test small end-to-end runs."""

    def assertReportSane(self, report):
        self.assertTrue(report.within_tolerance, report)
        self.assertGreaterEqual(report.gap, -report.tolerance)
        self.assertLessEqual(report.gate_error, report.epsilon)
        self.assertTrue(all(b <= a for a, b in zip(report.history, report.history[1:])))
        self.assertGreaterEqual(report.evaluations, report.samples)

    def test_phase_free_not(self):
        """Test theta = 0 finds a product near 1 without undershooting."""
        report = minimize_product(SearchConfig.for_gate(0.0, seed=7, **QUICK))
        self.assertReportSane(report)
        self.assertLessEqual(report.best_product, 1.0 + 1e-9)
        self.assertGreaterEqual(report.best_product, 0.95)
        self.assertEqual(report.samples, 2000)
        self.assertFalse(report.loose_fidelity)

    def test_half_pi(self):
        """Test theta = pi/2 stays at about 2."""
        report = minimize_product(SearchConfig.for_gate(math.pi / 2, seed=7, **QUICK))
        self.assertReportSane(report)
        self.assertGreaterEqual(report.best_product, 1.95)
        self.assertLessEqual(report.best_product, 2.0 + 1e-9)

    def test_rotations(self):
        """Test alpha = pi/4 and pi/2 against 2 alpha / pi."""
        for alpha, bound in ((math.pi / 4, 0.5), (math.pi / 2, 1.0)):
            report = rotation_search(SearchConfig.for_rotation(alpha, seed=11, **QUICK))
            self.assertReportSane(report)
            self.assertEqual(report.bound, bound)
            self.assertGreaterEqual(report.best_product, bound - 0.05)
            self.assertLessEqual(report.best_product, bound + 1e-9)

    def test_zero_rotation_degenerate(self):
        """Test alpha = 0 short-circuits to a degenerate report."""
        report = rotation_search(SearchConfig.for_rotation(0.0, seed=1))
        self.assertTrue(report.degenerate)
        self.assertEqual(report.best_product, 0.0)
        self.assertEqual(report.samples, 0)

    def test_deterministic(self):
        """Test identical configs give identical reports."""
        config = SearchConfig.for_gate(1.0, seed=99, **QUICK)
        self.assertEqual(minimize_product(config), minimize_product(config))

    def test_loose_fidelity_flag(self):
        """Test a loose epsilon is flagged and widens the tolerance."""
        report = minimize_product(SearchConfig.for_gate(0.0, epsilon=0.4, seed=7, **QUICK))
        self.assertTrue(report.loose_fidelity)
        self.assertEqual(report.tolerance, 20.0)
        self.assertLessEqual(report.best_product, 1.0 + 1e-9)

    def test_no_feasible_candidate(self):
        """Test an empty feasible pool raises with the sample count."""
        config = SearchConfig.for_gate(
            0.0, epsilon=1e-9, budget=5, repair_starts=0, inject_synthesized=False
        )
        with self.assertRaises(NoFeasibleCandidateError) as context:
            minimize_product(config)
        self.assertEqual(context.exception.samples, 5)

    def test_feasible_without_injection(self):
        """Test sampling plus repair finds feasible gates on its own."""
        for theta in (0.0, math.pi / 2):
            config = SearchConfig.for_gate(
                theta, budget=20_000, seed=7, refine_starts=0, inject_synthesized=False
            )
            report = minimize_product(config)
            self.assertLessEqual(report.gate_error, config.epsilon)
            self.assertGreaterEqual(report.gap, -0.05, report)
            self.assertTrue(validate(report.best_params).accepted)

    def test_wrong_kind(self):
        """Test each entry point refuses the other kind of config."""
        with self.assertRaises(SearchConfigError):
            minimize_product(SearchConfig.for_rotation(0.5))
        with self.assertRaises(SearchConfigError):
            rotation_search(SearchConfig.for_gate(0.5))

    def test_report_serialization(self):
        """Test the JSON and CSV forms of a report."""
        report = minimize_product(SearchConfig.for_gate(0.0, seed=7, **QUICK))
        data = json.loads(report.to_json())
        self.assertEqual(data["kind"], "theta")
        self.assertEqual(set(data["best_params"]), {"e11", "e22", "e12", "phi"})
        row = report.csv_row()
        self.assertEqual(len(row), len(CSV_COLUMNS))
        self.assertEqual(row[0], "theta")
        self.assertEqual(row[-1], 7)


@pytest.mark.slow
class TestFullScale(unittest.TestCase):
    """Full-budget consistency runs."""

    def test_gate_grid(self):
        """Test eleven phase shifts at budget 1e5 never undershoot."""
        for theta in np.linspace(0.0, math.pi, 11):
            report = minimize_product(SearchConfig.for_gate(theta, budget=100_000, seed=7))
            self.assertGreaterEqual(report.gap, -0.05, report)

    def test_gate_grid_without_injection(self):
        """Test runs relying on sampling and repair alone never undershoot."""
        for theta in (0.0, math.pi / 2, 2.5):
            config = SearchConfig.for_gate(theta, budget=100_000, seed=7, inject_synthesized=False)
            report = minimize_product(config)
            self.assertGreaterEqual(report.gap, -0.05, report)

    def test_named_gates(self):
        """Test theta = 0 and pi/2 land near their bounds."""
        low = minimize_product(SearchConfig.for_gate(0.0, budget=100_000, seed=7))
        self.assertTrue(0.95 <= low.best_product <= 1.05)
        high = minimize_product(SearchConfig.for_gate(math.pi / 2, budget=100_000, seed=7))
        self.assertTrue(1.95 <= high.best_product <= 2.10)

    def test_rotation_grid(self):
        """Test alpha in {pi/8, pi/4, 3 pi/8} lands near 2 alpha / pi."""
        for alpha in (math.pi / 8, math.pi / 4, 3 * math.pi / 8):
            report = rotation_search(SearchConfig.for_rotation(alpha, budget=100_000, seed=7))
            self.assertGreaterEqual(report.best_product, report.bound - 0.05)
            self.assertLessEqual(report.best_product, report.bound + 0.10)


if __name__ == "__main__":
    unittest.main()
