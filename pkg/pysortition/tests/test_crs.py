import unittest
import sys, os, itertools

sys.path.append(
    "/".join(
        os.path.dirname(os.path.dirname(os.path.abspath(__file__))).split("/")[:-1]
    )
)
import pysortition as ps
import numpy as np
from scipy.special import comb

__copyright__ = """

    Copyright 2024 PySortition developers

    This program is free software: you can redistribute it and/or modify
    it under the terms of the GNU General Public License as published by
    the Free Software Foundation, either version 3 of the License, or
    (at your option) any later version.

    This program is distributed in the hope that it will be useful,
    but WITHOUT ANY WARRANTY; without even the implied warranty of
    MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
    GNU General Public License for more details.

    You should have received a copy of the GNU General Public License
    along with this program.  If not, see <https://www.gnu.org/licenses/>.

"""

feasible = ps.WeightVector([0.17, 0.19, 0.20, 0.22, 0.22])


class BoundsTest(unittest.TestCase):
    def test_interval(self):
        lower, upper = ps.crs_bounds(5, 3)
        self.assertAlmostEqual(lower, 1 / 6, places=15)
        self.assertAlmostEqual(upper, 2 / 9, places=15)

    def test_uniform_always_feasible(self):
        for N, M in ((5, 3), (10, 9), (1000, 20), (1000, 999)):
            self.assertTrue(ps.crs_feasible(ps.WeightVector(np.ones(N)), M))

    def test_lower_violation(self):
        verdict = ps.crs_feasible(ps.WeightVector([0.05, 0.1, 0.15, 0.2, 0.5]), 3)
        self.assertFalse(verdict)
        self.assertEqual(verdict.index, 0)
        self.assertEqual(verdict.bound, "lower")
        self.assertIn("lower bound", verdict.diagnostic)

    def test_upper_violation(self):
        verdict = ps.crs_feasible(ps.WeightVector([0.18, 0.18, 0.18, 0.18, 0.28]), 3)
        self.assertFalse(verdict)
        self.assertEqual(verdict.index, 4)
        self.assertEqual(verdict.bound, "upper")

    def test_size_violation(self):
        verdict = ps.crs_feasible(ps.WeightVector(np.ones(5)), 2)
        self.assertFalse(verdict)
        self.assertEqual(verdict.bound, "size")
        self.assertFalse(ps.crs_feasible(ps.WeightVector(np.ones(5)), 5))


class CrsWeightsTest(unittest.TestCase):
    def test_uniform(self):
        cw = ps.crs_weights(ps.WeightVector(np.ones(5)), 3)
        np.testing.assert_allclose(cw.p, np.full(5, 0.2), atol=1e-15)
        self.assertAlmostEqual(cw.acceptance_scale, 0.6)
        self.assertAlmostEqual(cw.acceptance_rate, 1.0)

    def test_calibration(self):
        cw = ps.crs_weights(feasible, 3)
        np.testing.assert_allclose(cw.p, [0.02, 0.14, 0.20, 0.32, 0.32], atol=1e-12)
        self.assertAlmostEqual(cw.p.sum(), 1.0, places=12)
        self.assertTrue(np.all(cw.p <= 1 / 3))
        self.assertAlmostEqual(cw.acceptance_scale, 0.84, places=12)

    def test_lower_bound_gives_zero(self):
        cw = ps.crs_weights(ps.WeightVector([4, 5, 5, 5, 5]), 3)
        self.assertAlmostEqual(cw.p[0], 0.0, places=12)
        self.assertTrue(np.all(cw.p >= 0.0))

    def test_infeasible(self):
        with self.assertRaises(ps.InfeasibleWeights) as context:
            ps.crs_weights(ps.WeightVector([0.05, 0.1, 0.15, 0.2, 0.5]), 3)
        self.assertEqual(context.exception.index, 0)
        self.assertIn("[", context.exception.diagnostic)


class CrsSelectTest(unittest.TestCase):
    def test_select(self):
        stream = ps.PrngStream(3)
        for _ in range(100):
            outcome = ps.crs_select(feasible, 3, stream)
            self.assertEqual(outcome.M, 3)
            self.assertGreaterEqual(outcome.rounds, 1)
            for power in outcome.voting_power.values():
                self.assertAlmostEqual(power, 1 / 3)
        self.assertEqual(stream.counter % 4, 0)

    def test_deterministic(self):
        cw = ps.crs_weights(feasible, 3)
        first = ps.crs_select(feasible, 3, ps.PrngStream(8), weights=cw)
        second = ps.crs_select(feasible, 3, ps.PrngStream(8))
        self.assertEqual(first, second)

    def test_budget_exhausted(self):
        never = ps.CrsWeights(np.zeros(6), 3)
        with self.assertRaises(ps.RejectionBudgetExhausted) as context:
            ps.crs_select(ps.WeightVector(np.ones(6)), 3, ps.PrngStream(0), 5, weights=never)
        self.assertEqual(context.exception.rounds, 5)

    def test_low_weight_participant_rarely_chosen(self):
        # p_0 = 0.02 makes participant 0 the least likely member
        counts = np.zeros(5)
        stream = ps.PrngStream(12)
        for _ in range(3000):
            for member in ps.crs_select(feasible, 3, stream).members:
                counts[member] += 1
        self.assertEqual(int(np.argmin(counts)), 0)


def _enumerated_rate(cw, N, M):
    """Exact probability that one round accepts, listing every M-subset."""
    total = sum(cw.p[list(subset)].sum() for subset in itertools.combinations(range(N), M))
    return total / cw.acceptance_scale / comb(N, M, exact=True)


class AcceptanceTest(unittest.TestCase):
    def test_scale_bounds_every_subset(self):
        rng = np.random.default_rng(7)
        checked = 0
        for _ in range(100):
            N = int(rng.integers(4, 11))
            M = int(rng.integers(3, N))
            w = ps.WeightVector(1.0 + 0.3 * rng.random(N))
            if not ps.crs_feasible(w, M):
                continue
            cw = ps.crs_weights(w, M)
            for subset in itertools.combinations(range(N), M):
                self.assertLessEqual(cw.p[list(subset)].sum(), cw.acceptance_scale + 1e-15)
            checked += 1
        self.assertGreater(checked, 20)

    def test_rate_matches_enumeration(self):
        cases = (
            (feasible, 3),
            (ps.WeightVector([4, 5, 5, 5, 5]), 3),
            (ps.WeightVector(np.arange(30, 38)), 4),
        )
        for w, M in cases:
            cw = ps.crs_weights(w, M)
            self.assertAlmostEqual(cw.acceptance_rate, _enumerated_rate(cw, w.N, M), places=12)

    def test_mean_rounds(self):
        cw = ps.crs_weights(feasible, 3)
        rate = _enumerated_rate(cw, 5, 3)
        self.assertAlmostEqual(rate, 0.6 / 0.84, places=12)
        stream = ps.PrngStream(30)
        rounds = [ps.crs_select(feasible, 3, stream, weights=cw).rounds for _ in range(5000)]
        self.assertAlmostEqual(np.mean(rounds), 1 / rate, delta=0.05)


if __name__ == "__main__":
    unittest.main()
