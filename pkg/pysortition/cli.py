"""
Command line interface.

    pysortition select --algorithm rec --weights w.csv --size 2 --seed 7
    pysortition analyze --algorithm crs --weights w.csv --size 3
    pysortition fairness --algorithm stitch --weights w.csv --size 5 --trials 100000
    pysortition experiment mmax --n 1000 --grid 0:2:0.1

JSON and CSV go to stdout, messages to stderr. Exit status is 0 on success,
2 when the algorithm cannot run on the given inputs and 1 for anything else.
"""

import argparse, sys

import numpy as np

from .constants import (
    DEFAULT_N,
    DEFAULT_M,
    DEFAULT_S_GRID,
    DEFAULT_ALPHA_GRID,
    DEFAULT_LAMBDA_ALPHA_S,
    DEFAULT_MAX_ROUNDS,
    DEFAULT_MAX_WRS_CUTOFF,
)
from .core import load_weights
from .errors import SortitionError, FeasibilityError
from .prng import PrngStream
from .metrics import ALGORITHMS
from .main import Sortition, to_json
from .statistical import empirical_fairness
from .experiments import (
    ExperimentModel,
    SweepResult,
    sweep_m_max,
    sweep_lambda_vs_s,
    sweep_lambda_vs_alpha,
    time_wrs_weights,
)

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

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("%s: error: %s" % (self.prog, message))


def parse_grid(text):
    """Grid from "a,b,c" or an inclusive "start:stop:step"."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("range grids are start:stop:step, got %r" % text)
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError("empty range %r" % text)
        count = int(round((stop - start) / step)) + 1
        return [round(start + k * step, 10) for k in range(count)]
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("not a comma separated list of numbers: %r" % text)


def _add_selection_args(parser, seeded=True):
    parser.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    parser.add_argument("--weights", required=True, help="CSV file with header id,weight")
    parser.add_argument("--size", required=True, type=int, help="Committee size M")
    parser.add_argument("--alpha", type=float, help="wrs stake threshold in (0, 1)")
    parser.add_argument("--permute", action="store_true", help="stitch: shuffle the layout first")
    parser.add_argument("--max-rounds", type=int, default=DEFAULT_MAX_ROUNDS)
    parser.add_argument("--debug", action="store_true")
    if seeded:
        parser.add_argument("--seed", type=int, default=0, help="64-bit unsigned seed")


def build_parser():
    parser = _Parser(prog="pysortition", description="Weighted committee selection")
    commands = parser.add_subparsers(dest="command")
    commands.required = True

    select = commands.add_parser("select", help="Select one committee")
    _add_selection_args(select)

    analyze = commands.add_parser("analyze", help="Decentralization report")
    _add_selection_args(analyze, seeded=False)

    fairness = commands.add_parser("fairness", help="Empirical fairness test")
    _add_selection_args(fairness)
    fairness.add_argument("--trials", type=int, default=100000)
    fairness.add_argument("--num-cpus", type=int)

    experiment = commands.add_parser("experiment", help="Zipf sweeps as CSV")
    experiment.add_argument("kind", choices=("mmax", "lambda-s", "lambda-alpha", "wrs-timing"))
    experiment.add_argument("--settings", help="JSON settings file, flags override it")
    experiment.add_argument("--n", type=int)
    experiment.add_argument("--m", type=int)
    experiment.add_argument("--grid", type=parse_grid, help="Zipf exponents, a,b,c or start:stop:step")
    experiment.add_argument("--alpha-grid", type=parse_grid, help="wrs thresholds")
    experiment.add_argument("--max-cutoff", type=int)
    experiment.add_argument("--validate", type=int, help="Selections per grid point checking lambda")
    experiment.add_argument("--seed", type=int)
    experiment.add_argument("--all-algorithms", action="store_true", help="mmax: add wrs and rec rows")
    experiment.add_argument("--num-cpus", type=int)
    experiment.add_argument("--debug", action="store_true")
    return parser


def _sortition(args):
    ids, weights = load_weights(args.weights, integer=args.algorithm == "wrs")
    sortition = Sortition(
        args.algorithm,
        weights,
        args.size,
        alpha=args.alpha,
        permute_first=args.permute,
        max_rounds=args.max_rounds,
        debug=args.debug,
    )
    return ids, sortition


def _experiment_settings(args):
    settings = {
        "n": DEFAULT_N,
        "m": DEFAULT_M,
        "s_grid": list(DEFAULT_S_GRID),
        "alpha_grid": list(DEFAULT_ALPHA_GRID),
        "lambda_alpha_s": list(DEFAULT_LAMBDA_ALPHA_S),
        "max_wrs_cutoff": DEFAULT_MAX_WRS_CUTOFF,
        "validate_trials": 0,
        "seed": 0,
    }
    if args.settings:
        model = ExperimentModel(args.settings)
        settings.update({key: getattr(model, key) for key in settings})

    overrides = {
        "n": args.n,
        "m": args.m,
        "alpha_grid": args.alpha_grid,
        "max_wrs_cutoff": args.max_cutoff,
        "validate_trials": args.validate,
        "seed": args.seed,
    }
    if args.grid is not None:
        # lambda-alpha and wrs-timing read their exponents from the same flag
        overrides["s_grid"] = args.grid
        overrides["lambda_alpha_s"] = args.grid
    settings.update({k: v for k, v in overrides.items() if v is not None})
    return settings


def run_experiment(args):
    settings = _experiment_settings(args)
    n, m = settings["n"], settings["m"]
    if args.kind == "mmax":
        return sweep_m_max(n, settings["s_grid"], all_algorithms=args.all_algorithms)
    if args.kind == "lambda-s":
        return sweep_lambda_vs_s(
            n,
            m,
            settings["s_grid"],
            settings["alpha_grid"],
            settings["max_wrs_cutoff"],
            settings["validate_trials"],
            settings["seed"],
            args.num_cpus,
            args.debug,
        )
    if args.kind == "lambda-alpha":
        frames = [
            sweep_lambda_vs_alpha(
                n, m, s, settings["alpha_grid"], settings["max_wrs_cutoff"], args.num_cpus, args.debug
            ).frame
            for s in settings["lambda_alpha_s"]
        ]
        return SweepResult("lambda-alpha", pd.concat(frames, ignore_index=True))
    return time_wrs_weights(
        n, m, settings["lambda_alpha_s"], settings["alpha_grid"], settings["max_wrs_cutoff"]
    )


def _run(args, out):
    if args.command == "experiment":
        out.write(run_experiment(args).to_csv())
        return

    ids, sortition = _sortition(args)
    if args.command == "select":
        outcome = sortition.select(PrngStream(args.seed))
        data = outcome.to_dict(ids)
        data["seed"] = args.seed
    elif args.command == "analyze":
        data = sortition.report().to_dict()
    else:
        data = empirical_fairness(
            sortition, args.trials, PrngStream(args.seed), args.num_cpus, args.debug
        ).to_dict()
    out.write(to_json(data) + "\n")


def cli_main(argv=None, out=None, err=None):
    """Run the command line.

    Args:
        argv (list of str, optional): Arguments without the program name. Defaults to sys.argv[1:].
        out (file, optional): Where results go. Defaults to sys.stdout.
        err (file, optional): Where messages go. Defaults to sys.stderr.

    Returns:
        int: Exit status.
    """
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as error:
        print(parser.format_usage().rstrip(), file=err)
        print(error, file=err)
        return EXIT_ERROR
    except SystemExit as exit:
        return exit.code or EXIT_OK

    try:
        _run(args, out)
    except FeasibilityError as error:
        print("infeasible: %s" % error, file=err)
        return EXIT_INFEASIBLE
    except (SortitionError, ValueError, OSError) as error:
        print("error: %s" % error, file=err)
        return EXIT_ERROR
    return EXIT_OK


def main():
    sys.exit(cli_main())
