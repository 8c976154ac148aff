import unittest
import sys, os

sys.path.append(
    "/".join(
        os.path.dirname(os.path.dirname(os.path.abspath(__file__))).split("/")[:-1]
    )
)
import pysortition as ps
import numpy as np

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

w = ps.WeightVector([0.25, 0.30, 0.45])


class StitchTest(unittest.TestCase):
    def test_committee_at_start_point(self):
        self.assertEqual(ps.stitch_committee_at(w, 2, 0.1), frozenset([0, 2]))
        self.assertEqual(ps.stitch_committee_at(w, 2, 0.3), frozenset([1, 2]))
        self.assertEqual(ps.stitch_committee_at(w, 2, 0.0), frozenset([0, 1]))

    def test_committee_with_layout_order(self):
        # Layout 2, 1, 0 puts the edges at 0.45 and 0.75
        order = np.array([2, 1, 0])
        self.assertEqual(ps.stitch_committee_at(w, 2, 0.1, order=order), frozenset([1, 2]))

    def test_segments(self):
        segments = list(ps.stitch_segments(w, 2))
        self.assertEqual(len(segments), 3)
        expected = [(0.0, 0.05, {0, 1}), (0.05, 0.2, {0, 2}), (0.25, 0.25, {1, 2})]
        for (start, length, members), (e_start, e_length, e_members) in zip(segments, expected):
            self.assertAlmostEqual(start, e_start, places=12)
            self.assertAlmostEqual(length, e_length, places=12)
            self.assertEqual(set(members.tolist()), e_members)
        self.assertAlmostEqual(sum(length for _, length, _ in segments), 0.5, places=12)

    def test_exact_expected_power(self):
        np.testing.assert_allclose(ps.stitch_exact_expected_power(w, 2), w.weights, atol=1e-12)
        skewed = ps.WeightVector(1.0 / np.arange(1, 31))
        M = ps.m_max("stitch", skewed)
        np.testing.assert_allclose(
            ps.stitch_exact_expected_power(skewed, M), skewed.weights, atol=1e-12
        )

    def test_select(self):
        stream = ps.PrngStream(1)
        outcome = ps.stitch_select(w, ps.StitchConfig(2), stream)
        self.assertEqual(stream.counter, 1)
        self.assertEqual(outcome.M, 2)
        self.assertEqual(outcome.algorithm, "stitch")
        self.assertEqual(set(outcome.voting_power.values()), {0.5})

    def test_select_matches_start_point(self):
        x = ps.PrngStream(9).unit()
        outcome = ps.stitch_select(w, ps.StitchConfig(2), ps.PrngStream(9))
        self.assertEqual(outcome.members, ps.stitch_committee_at(w, 2, x))

    def test_permuted_select(self):
        stream = ps.PrngStream(4)
        cfg = ps.StitchConfig(2, permute_first=True)
        outcome = ps.stitch_select(w, cfg, stream)
        self.assertEqual(stream.counter, 4)
        self.assertEqual(outcome.M, 2)
        self.assertEqual(outcome, ps.stitch_select(w, cfg, ps.PrngStream(4)))

    def test_uniform_committees_are_evenly_spaced(self):
        uniform = ps.WeightVector(np.ones(6))
        stream = ps.PrngStream(21)
        for _ in range(50):
            members = sorted(ps.stitch_select(uniform, ps.StitchConfig(3), stream).members)
            self.assertIn(members, ([0, 2, 4], [1, 3, 5]))

    def test_weight_too_large(self):
        heavy = ps.WeightVector([0.5, 0.25, 0.25])
        with self.assertRaises(ps.WeightTooLarge) as context:
            ps.stitch_select(heavy, ps.StitchConfig(2), ps.PrngStream(0))
        self.assertEqual(context.exception.index, 0)
        self.assertRaises(ps.FeasibilityError, ps.check_stitch_feasible, heavy, 2)
        ps.check_stitch_feasible(heavy, 1)

    def test_size_checked(self):
        self.assertRaises(
            ps.SizeExceedsPopulation, ps.stitch_select, w, ps.StitchConfig(4), ps.PrngStream(0)
        )
        self.assertRaises(ValueError, ps.StitchConfig, 0)


if __name__ == "__main__":
    unittest.main()
