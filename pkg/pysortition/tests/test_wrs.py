import unittest
import sys, os, itertools, warnings
from fractions import Fraction

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

"""Stakes (1, 1, 2, 4), committees of two, threshold half the stake (V = 4)"""
stakes = ps.IntegerWeightVector([1, 1, 2, 4])
cfg = ps.WrsConfig.for_weights(stakes, 2, 0.5)


class CutoffTest(unittest.TestCase):
    def test_cutoff(self):
        self.assertEqual(cfg.V, 4)
        self.assertEqual(ps.wrs_cutoff(0.5, 8), 4)
        self.assertEqual(ps.wrs_cutoff(0.5, 9), 5)

    def test_cutoff_is_exact(self):
        # 0.07 * 100 is 7.000000000000001 in floating point
        self.assertEqual(ps.wrs_cutoff(0.07, 100), 7)
        self.assertEqual(ps.wrs_cutoff(0.1, 30), 3)
        self.assertEqual(ps.exact_alpha(0.1), Fraction(1, 10))

    def test_alpha_range(self):
        self.assertRaises(ValueError, ps.wrs_cutoff, 0.0, 8)
        self.assertRaises(ValueError, ps.wrs_cutoff, 1.0, 8)


class FeasibilityTest(unittest.TestCase):
    def test_feasible(self):
        self.assertTrue(ps.wrs_strong_feasible(stakes, 2, 4))

    def test_participant_left_out(self):
        verdict = ps.wrs_strong_feasible(stakes, 2, 6)
        self.assertFalse(verdict)
        self.assertEqual(verdict.index, 0)
        self.assertEqual(verdict.best, 5)

    def test_no_committee_reaches_cutoff(self):
        verdict = ps.wrs_strong_feasible(stakes, 2, 7)
        self.assertFalse(verdict)
        self.assertIsNone(verdict.index)
        self.assertEqual(verdict.best, 6)

    def test_weights_raise(self):
        with self.assertRaises(ps.InfeasibleAlpha) as context:
            ps.wrs_weights(stakes, ps.WrsConfig.for_weights(stakes, 2, 0.75))
        self.assertEqual(context.exception.index, 0)


class CountTableTest(unittest.TestCase):
    def test_small_table(self):
        layer = ps.wrs_count_table(stakes, 2, 4)
        self.assertEqual(layer.count(0, 0), 1)
        self.assertEqual(layer.count(1, 0), 0)
        self.assertEqual(layer.count(1, 1), 2)
        self.assertEqual(layer.count(2, 1), 1)
        self.assertEqual(layer.count(2, 2), 1)
        self.assertEqual(layer.count(3, 2), 2)
        self.assertEqual(layer.count(4, 1), 0)
        self.assertEqual(layer.below_cutoff(2), 3)
        self.assertEqual(layer.counts.shape, (4, 3))

    def test_equal_weights(self):
        layer = ps.wrs_count_table(ps.IntegerWeightVector([3] * 6), 3, 10)
        for k in range(4):
            for v in range(10):
                expected = int(comb(6, k, exact=True)) if v == 3 * k else 0
                self.assertEqual(layer.count(v, k), expected)

    def test_order_does_not_matter(self):
        a = ps.wrs_count_table(ps.IntegerWeightVector([5, 1, 3, 2, 4]), 3, 9).counts
        b = ps.wrs_count_table(ps.IntegerWeightVector([1, 2, 3, 4, 5]), 3, 9).counts
        self.assertTrue((a == b).all())

    def test_bad_cutoff(self):
        self.assertRaises(ValueError, ps.wrs_count_table, stakes, 2, 0)


class CountsTest(unittest.TestCase):
    def test_example_counts(self):
        self.assertEqual(ps.wrs_counts_per_participant(stakes, 2, 4), [1, 1, 1, 3])

    def test_nothing_rejected(self):
        iw = ps.IntegerWeightVector([2, 7, 3, 9, 4, 4])
        counts = ps.wrs_counts_per_participant(iw, 3, 5)
        self.assertEqual(counts, [int(comb(5, 2, exact=True))] * 6)

    def test_large_exact_counts(self):
        # Every 20-subset of 1000 unit stakes clears V = 10
        iw = ps.IntegerWeightVector([1] * 1000)
        config = ps.WrsConfig.for_weights(iw, 20, 0.01)
        self.assertEqual(config.V, 10)
        layer = ps.wrs_count_table(iw, 20, config.V)
        self.assertEqual(layer.count(5, 5), int(comb(1000, 5, exact=True)))
        self.assertEqual(layer.below_cutoff(20), 0)
        counts = ps.wrs_counts_per_participant(iw, 20, config.V, layer)
        self.assertEqual(set(counts), {int(comb(999, 19, exact=True))})
        self.assertGreater(counts[0], 2**64)

    def test_unreachable_cutoff(self):
        iw = ps.IntegerWeightVector([1] * 1000)
        self.assertRaises(ps.InfeasibleAlpha, ps.wrs_weights, iw, ps.WrsConfig.for_weights(iw, 20, 0.5))

    def test_layer_mismatch(self):
        layer = ps.wrs_count_table(stakes, 2, 4)
        self.assertRaises(ValueError, ps.wrs_counts_per_participant, stakes, 2, 5, layer)


class WrsWeightsTest(unittest.TestCase):
    def test_example(self):
        ww = ps.wrs_weights(stakes, cfg)
        self.assertEqual(ww.C, (1, 1, 1, 3))
        np.testing.assert_allclose(ww.p, np.array([3, 3, 6, 4]) / 16, atol=1e-15)
        self.assertAlmostEqual(ww.acceptance_scale, 10 / 16)
        self.assertEqual(ww.ratios[3], Fraction(4, 3))

    def test_uniform(self):
        iw = ps.IntegerWeightVector([1] * 6)
        ww = ps.wrs_weights(iw, ps.WrsConfig.for_weights(iw, 3, 0.1))
        np.testing.assert_allclose(ww.p, np.full(6, 1 / 6), atol=1e-15)

    def test_total_mismatch(self):
        self.assertRaises(ValueError, ps.wrs_weights, stakes, ps.WrsConfig(2, 0.5, 9))

    def test_acceptance_rate(self):
        ww = ps.wrs_weights(stakes, cfg)
        # Eligible pairs {0,3}, {1,3}, {2,3} out of 6, each accepted with sum(p) / scale
        self.assertAlmostEqual(ww.acceptance_rate, 0.4, places=12)
        p, total = ww.p, 0.0
        for subset in itertools.combinations(range(4), 2):
            if sum(stakes.raw_weights[list(subset)]) >= cfg.V:
                total += p[list(subset)].sum() / ww.acceptance_scale
        self.assertAlmostEqual(ww.acceptance_rate, total / comb(4, 2, exact=True), places=12)

    def test_mean_rounds(self):
        ww = ps.wrs_weights(stakes, cfg)
        stream = ps.PrngStream(21)
        rounds = [ps.wrs_select(stakes, cfg, ww, stream).rounds for _ in range(4000)]
        self.assertAlmostEqual(np.mean(rounds), 1 / ww.acceptance_rate, delta=0.15)

    def test_slow_acceptance_warning(self):
        # Only committees holding both heavy stakes reach the cutoff
        iw = ps.IntegerWeightVector([2000, 2000] + [1] * 398)
        slow = ps.WrsConfig.for_weights(iw, 3, 0.9)
        with self.assertWarns(UserWarning) as context:
            ww = ps.wrs_weights(iw, slow)
        self.assertIn("slow", str(context.warning))
        self.assertLess(ww.acceptance_rate, 1e-4)
        self.assertEqual(ww.C[0], 398)
        self.assertEqual(ww.C[2], 1)

    def test_no_warning_when_rounds_accept(self):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            ps.wrs_weights(stakes, cfg)
        self.assertEqual(len(caught), 0)


class WrsSelectTest(unittest.TestCase):
    def test_gate_and_powers(self):
        ww = ps.wrs_weights(stakes, cfg)
        stream = ps.PrngStream(6)
        seen = set()
        for _ in range(300):
            outcome = ps.wrs_select(stakes, cfg, ww, stream)
            members = sorted(outcome.members)
            self.assertGreaterEqual(sum(int(stakes.raw_weights[m]) for m in members), cfg.V)
            self.assertIn(3, members)
            if members == [2, 3]:
                self.assertAlmostEqual(outcome.voting_power[2], 0.6)
                self.assertAlmostEqual(outcome.voting_power[3], 0.4)
            seen.add(tuple(members))
        self.assertEqual(seen, {(0, 3), (1, 3), (2, 3)})

    def test_round_budget_must_be_positive(self):
        ww = ps.wrs_weights(stakes, cfg)
        self.assertRaises(
            ValueError, ps.wrs_select, stakes, cfg, ww, ps.PrngStream(0), max_rounds=0
        )


class LambdaBoundTest(unittest.TestCase):
    def test_example(self):
        ww = ps.wrs_weights(stakes, cfg)
        table = ps.wrs_lambda_table(stakes, ww, 2)
        self.assertEqual(table["exact"], Fraction(1, 4))
        self.assertEqual(table["argmin"], 0)
        self.assertAlmostEqual(ps.wrs_lambda_bound(stakes, ww, 2), 0.25)

    def test_bound_holds_on_every_committee(self):
        ww = ps.wrs_weights(stakes, cfg)
        bound = ps.wrs_lambda_bound(stakes, ww, 2)
        weights = stakes.normalized().weights
        stream = ps.PrngStream(10)
        worst = 0.0
        for _ in range(2000):
            outcome = ps.wrs_select(stakes, cfg, ww, stream)
            worst = max(worst, max(p / weights[n] for n, p in outcome.voting_power.items()))
        self.assertLessEqual(worst, 1 / bound)
        self.assertAlmostEqual(worst, 24 / 7)

    def test_uniform_closed_form(self):
        iw = ps.IntegerWeightVector([1] * 10)
        ww = ps.wrs_weights(iw, ps.WrsConfig.for_weights(iw, 4, 0.1))
        self.assertEqual(ps.wrs_lambda_table(iw, ww, 4)["exact"], Fraction(4, 10))


if __name__ == "__main__":
    unittest.main()
