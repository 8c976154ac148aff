import unittest
import sys, os, io, json, argparse
from contextlib import redirect_stdout

sys.path.append(
    "/".join(
        os.path.dirname(os.path.dirname(os.path.abspath(__file__))).split("/")[:-1]
    )
)
import pysortition as ps
from pysortition.cli import cli_main, parse_grid
import pandas as pd

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

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
REC = os.path.join(DATA, "rec_example.csv")
STAKES = os.path.join(DATA, "stakes_example.csv")
CRS_INFEASIBLE = os.path.join(DATA, "crs_infeasible.csv")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


class SelectTest(unittest.TestCase):
    def test_repeatable(self):
        args = ("select", "--algorithm", "rec", "--weights", REC, "--size", "2", "--seed", "7")
        first = run(*args)
        second = run(*args)
        self.assertEqual(first[0], 0)
        self.assertEqual(first, second)
        data = json.loads(first[1])
        self.assertEqual(data["seed"], 7)
        self.assertEqual(len(data["members"]), 2)
        self.assertEqual(data["algorithm"], "rec")

    def test_wrs(self):
        code, out, _ = run(
            "select", "--algorithm", "wrs", "--weights", STAKES, "--size", "2", "--alpha", "0.5"
        )
        self.assertEqual(code, 0)
        self.assertIn("dave", json.loads(out)["member_ids"])

    def test_wrs_needs_alpha(self):
        code, _, err = run("select", "--algorithm", "wrs", "--weights", STAKES, "--size", "2")
        self.assertEqual(code, 1)
        self.assertIn("alpha", err)

    def test_missing_file(self):
        code, out, err = run(
            "select", "--algorithm", "rec", "--weights", os.path.join(DATA, "nope.csv"), "--size", "2"
        )
        self.assertEqual(code, 1)
        self.assertEqual(out, "")
        self.assertTrue(err.startswith("error:"))


class AnalyzeTest(unittest.TestCase):
    def test_infeasible(self):
        code, out, err = run("analyze", "--algorithm", "crs", "--weights", CRS_INFEASIBLE, "--size", "3")
        self.assertEqual(code, 2)
        self.assertEqual(out, "")
        self.assertIn("lower bound", err)

    def test_report(self):
        code, out, _ = run("analyze", "--algorithm", "rec", "--weights", REC, "--size", "2")
        self.assertEqual(code, 0)
        self.assertAlmostEqual(json.loads(out)["lambda"], 0.25)

    def test_stitch_too_heavy(self):
        code, _, err = run("analyze", "--algorithm", "stitch", "--weights", CRS_INFEASIBLE, "--size", "2")
        self.assertEqual(code, 2)
        self.assertIn("infeasible", err)


class FairnessCommandTest(unittest.TestCase):
    def test_fairness(self):
        code, out, _ = run(
            "fairness", "--algorithm", "rec", "--weights", REC, "--size", "2", "--trials", "2000"
        )
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertEqual(data["trials"], 2000)
        self.assertEqual(len(data["per_participant"]), 5)


class ExperimentCommandTest(unittest.TestCase):
    def test_mmax_matches_library(self):
        code, out, _ = run("experiment", "mmax", "--n", "1000", "--grid", "0:2:0.1")
        self.assertEqual(code, 0)
        expected = ps.sweep_m_max(1000, [round(0.1 * k, 1) for k in range(21)]).to_csv()
        self.assertEqual(out, expected)

    def test_lambda_alpha(self):
        code, out, _ = run(
            "experiment", "lambda-alpha", "--n", "1000", "--m", "20", "--grid", "1.0",
            "--alpha-grid", "0.05,0.1",
        )
        self.assertEqual(code, 0)
        frame = pd.read_csv(io.StringIO(out))
        self.assertEqual(frame["V"].tolist(), [373, 745])

    def test_settings_file(self):
        code, out, _ = run(
            "experiment", "mmax", "--settings", os.path.join(DATA, "test_settings.json"),
            "--all-algorithms",
        )
        self.assertEqual(code, 0)
        self.assertEqual(len(pd.read_csv(io.StringIO(out))), 12)


class UsageTest(unittest.TestCase):
    def test_no_command(self):
        code, _, err = run()
        self.assertEqual(code, 1)
        self.assertIn("usage", err)

    def test_bad_algorithm(self):
        code, _, err = run("select", "--algorithm", "lottery", "--weights", REC, "--size", "2")
        self.assertEqual(code, 1)
        self.assertIn("invalid choice", err)

    def test_missing_size(self):
        self.assertEqual(run("select", "--algorithm", "rec", "--weights", REC)[0], 1)

    def test_bad_grid(self):
        self.assertEqual(run("experiment", "mmax", "--grid", "2:0:0.1")[0], 1)

    def test_help(self):
        with redirect_stdout(io.StringIO()) as printed:
            code = cli_main(["--help"])
        self.assertEqual(code, 0)
        self.assertIn("select", printed.getvalue())

    def test_parse_grid(self):
        self.assertEqual(parse_grid("0.5,1.0,1.5"), [0.5, 1.0, 1.5])
        self.assertEqual(parse_grid("0:1:0.25"), [0.0, 0.25, 0.5, 0.75, 1.0])
        self.assertRaises(argparse.ArgumentTypeError, parse_grid, "1:0:0.1")
        self.assertRaises(argparse.ArgumentTypeError, parse_grid, "a,b")


if __name__ == "__main__":
    unittest.main()
