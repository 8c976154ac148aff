"""
Zipf-weighted experiments: feasibility envelopes, decentralization against
the Zipf exponent s and against the wrs threshold alpha.

Grid points are independent and run through statistical.run_tasks, so they
go parallel when ray is available. Rows always come out in grid order.
"""

import os, sys, json, time, warnings
from datetime import datetime

import numpy as np
import pandas as pd

from .constants import (
    DEFAULT_N,
    DEFAULT_M,
    DEFAULT_S_GRID,
    DEFAULT_ALPHA_GRID,
    DEFAULT_LAMBDA_ALPHA_S,
    DEFAULT_MAX_WRS_CUTOFF,
    CSV_FLOAT_FORMAT,
)
from .core import WeightVector, IntegerWeightVector
from .errors import FeasibilityError
from .prng import PrngStream
from .metrics import m_max, lambda_for, ALGORITHMS
from .wrs import (
    WrsConfig,
    wrs_weights,
    wrs_count_table,
    wrs_lambda_table,
    wrs_strong_feasible,
)
from .main import Sortition
from .statistical import run_tasks, validate_lambda

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

M_MAX_COLUMNS = ["s", "algorithm", "m_max"]
LAMBDA_S_COLUMNS = ["s", "algorithm", "lambda", "lambda_kind", "feasible", "alpha", "note"]
LAMBDA_ALPHA_COLUMNS = ["s", "alpha", "V", "lambda", "feasible", "best", "note"]
TIMING_COLUMNS = ["s", "alpha", "V", "moduli", "seconds"]


class ZipfParams:
    """Zipf weight settings.

    Args:
        N (int): Participants, at least 1.
        s (float): Exponent, at least 0. s = 0 gives equal weights.
        mode (str, optional): "continuous" for normalized 1/i^s or "integer" for
            round(N^s / i^s). Defaults to "continuous".
    """

    def __init__(self, N, s, mode="continuous"):
        if int(N) != N or N < 1:
            raise ValueError("N must be a positive integer, got %r" % N)
        if not np.isfinite(s) or s < 0:
            raise ValueError("Zipf exponent s must be finite and >= 0, got %r" % s)
        if mode not in ("continuous", "integer"):
            raise ValueError("mode must be 'continuous' or 'integer', got %r" % mode)
        self.N = int(N)
        self.s = float(s)
        self.mode = mode

    def __repr__(self):
        return "ZipfParams(N=%s, s=%s, mode=%s)" % (self.N, self.s, self.mode)


def zipf_weights(params):
    """Zipf weights w_i proportional to 1/i^s, i = 1..N.

    Integer mode rounds N^s / i^s half to even and lifts zeros to 1.

    Args:
        params (ZipfParams): N, s and mode.

    Returns:
        WeightVector or IntegerWeightVector: The weights.
    """
    ranks = np.arange(1, params.N + 1, dtype=np.float64)
    if params.mode == "continuous":
        return WeightVector(1.0 / ranks**params.s)
    scale = params.N**params.s
    return IntegerWeightVector([max(1, round(scale / i**params.s)) for i in range(1, params.N + 1)])


class SweepResult:
    """Rows of one sweep.

    Attributes:
        kind (str): "mmax", "lambda-s", "lambda-alpha" or "wrs-timing".
        frame (pandas.DataFrame): The rows, columns fixed per kind.
    """

    def __init__(self, kind, frame):
        self.kind = kind
        self.frame = frame

    def __len__(self):
        return len(self.frame)

    def __repr__(self):
        return "SweepResult(%s, rows=%s)" % (self.kind, len(self.frame))

    def to_csv(self, path=None):
        """CSV text with 12 significant digits and "\\n" line ends, written to `path` if given."""
        text = self.frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT)
        text = text.replace("\r\n", "\n")
        if path is not None:
            with open(path, "w", newline="") as f:
                f.write(text)
        return text


def _check_s_grid(s_grid):
    s_grid = [float(s) for s in s_grid]
    if not s_grid:
        raise ValueError("Empty s grid")
    for s in s_grid:
        if not np.isfinite(s) or s < 0:
            raise ValueError("Zipf exponents must be finite and >= 0, got %r" % s)
    return s_grid


def _check_alpha_grid(alpha_grid):
    alpha_grid = [float(a) for a in alpha_grid]
    if not alpha_grid:
        raise ValueError("Empty alpha grid")
    for alpha in alpha_grid:
        if not 0 < alpha < 1:
            raise ValueError("alpha values must lie strictly between 0 and 1, got %r" % alpha)
    return alpha_grid


def sweep_m_max(N, s_grid, all_algorithms=False):
    """Largest permitted committee size per Zipf exponent.

    Args:
        N (int): Participants.
        s_grid (list of float): Exponents.
        all_algorithms (bool, optional): Also emit wrs and rec rows (always N). Defaults to False.

    Returns:
        SweepResult: Columns s, algorithm, m_max.
    """
    algorithms = ALGORITHMS if all_algorithms else ("stitch", "crs")
    rows = []
    for s in _check_s_grid(s_grid):
        w = zipf_weights(ZipfParams(N, s))
        for algorithm in algorithms:
            rows.append([s, algorithm, m_max(algorithm, w)])
    return SweepResult("mmax", pd.DataFrame(rows, columns=M_MAX_COLUMNS))


def wrs_alpha_point(iw, M, alpha, max_cutoff=DEFAULT_MAX_WRS_CUTOFF):
    """wrs decentralization bound at one threshold.

    Args:
        iw (IntegerWeightVector): Stakes.
        M (int): Committee size.
        alpha (float): Threshold fraction.
        max_cutoff (int, optional): Skip cutoffs V above this. Defaults to 100000.

    Returns:
        tuple: (V, exact lambda as a Fraction or None, note). note explains a None.
    """
    cfg = WrsConfig.for_weights(iw, M, alpha)
    if cfg.V > max_cutoff:
        note = "cutoff V=%s exceeds the budget of %s" % (cfg.V, max_cutoff)
        warnings.warn("Skipping alpha=%s, %s" % (alpha, note))
        return cfg.V, None, note
    verdict = wrs_strong_feasible(iw, cfg.M, cfg.V)
    if not verdict:
        return cfg.V, None, str(verdict.error(cfg.V))
    try:
        ww = wrs_weights(iw, cfg)
    except FeasibilityError as error:
        return cfg.V, None, str(error)
    return cfg.V, wrs_lambda_table(iw, ww, cfg.M)["exact"], ""


def _report_row(s, algorithm, w, M):
    try:
        report = lambda_for(algorithm, w, M)
    except FeasibilityError as error:
        return [s, algorithm, np.nan, "exact", False, np.nan, str(error)]
    return [s, algorithm, report.lam, report.lambda_kind, True, np.nan, ""]


def _lambda_rows_at(N, M, s, alpha_grid, max_cutoff, validate_trials, stream, debug):
    if debug:
        print("lambda-s: s=%s" % s, file=sys.stderr)
    w = zipf_weights(ZipfParams(N, s))
    rows = [_report_row(s, algorithm, w, M) for algorithm in ("stitch", "crs", "rec")]

    iw = zipf_weights(ZipfParams(N, s, "integer"))
    best_alpha, best_lam, notes = None, None, []
    for alpha in alpha_grid:
        _, lam, note = wrs_alpha_point(iw, M, alpha, max_cutoff)
        if lam is None:
            notes.append(note)
        elif best_lam is None or lam > best_lam:
            best_alpha, best_lam = alpha, lam
    if best_lam is None:
        rows.append(
            [s, "wrs", np.nan, "lower_bound", False, np.nan, "no feasible alpha: %s" % notes[-1]]
        )
    else:
        rows.append([s, "wrs", float(best_lam), "lower_bound", True, best_alpha, ""])

    if validate_trials:
        for lane, row in enumerate(rows):
            if not row[4]:
                continue
            if row[1] == "wrs":
                sortition = Sortition("wrs", iw, M, alpha=row[5])
            else:
                sortition = Sortition(row[1], w, M)
            validate_lambda(sortition, validate_trials, stream.spawn(lane), lam=row[2], num_cpus=1)
    return rows


def sweep_lambda_vs_s(
    N,
    M,
    s_grid,
    alpha_grid=DEFAULT_ALPHA_GRID,
    max_cutoff=DEFAULT_MAX_WRS_CUTOFF,
    validate_trials=0,
    seed=0,
    num_cpus=None,
    debug=False,
):
    """Decentralization of every algorithm against the Zipf exponent.

    stitch, crs and rec use continuous weights; wrs uses integer weights and
    reports the best bound over alpha_grid. Infeasible points give a row with
    feasible=False and the reason in `note`.

    Args:
        N (int): Participants.
        M (int): Committee size.
        s_grid (list of float): Exponents.
        alpha_grid (list of float, optional): wrs thresholds to search.
        max_cutoff (int, optional): Largest wrs cutoff V to build a table for.
        validate_trials (int, optional): Seeded selections per feasible row checking the
            reported lambda, 0 to skip. Defaults to 0.
        seed (int, optional): Seed of the validation streams. Defaults to 0.
        num_cpus (int, optional): Workers for the grid points.
        debug (bool, optional): Print progress to stderr. Defaults to False.

    Returns:
        SweepResult: Columns s, algorithm, lambda, lambda_kind, feasible, alpha, note.

    Raises:
        DecentralizationBoundViolated: Validation found a ratio above 1/lambda.
    """
    s_grid = _check_s_grid(s_grid)
    alpha_grid = _check_alpha_grid(alpha_grid)
    root = PrngStream(seed)
    arg_list = [
        (N, M, s, alpha_grid, max_cutoff, validate_trials, root.spawn(k), debug)
        for k, s in enumerate(s_grid)
    ]
    rows = [row for chunk in run_tasks(_lambda_rows_at, arg_list, num_cpus, debug) for row in chunk]
    return SweepResult("lambda-s", pd.DataFrame(rows, columns=LAMBDA_S_COLUMNS))


def sweep_lambda_vs_alpha(
    N, M, s, alpha_grid=DEFAULT_ALPHA_GRID, max_cutoff=DEFAULT_MAX_WRS_CUTOFF, num_cpus=None, debug=False
):
    """wrs decentralization bound against the threshold alpha.

    Args:
        N (int): Participants.
        M (int): Committee size.
        s (float): Zipf exponent of the integer weights.
        alpha_grid (list of float, optional): Thresholds.
        max_cutoff (int, optional): Largest cutoff V to build a table for.
        num_cpus (int, optional): Workers for the grid points.
        debug (bool, optional): Print progress to stderr. Defaults to False.

    Returns:
        SweepResult: Columns s, alpha, V, lambda, feasible, best, note. `best` marks the
        first alpha attaining the largest bound.
    """
    s = _check_s_grid([s])[0]
    alpha_grid = _check_alpha_grid(alpha_grid)
    iw = zipf_weights(ZipfParams(N, s, "integer"))
    arg_list = [(iw, M, alpha, max_cutoff) for alpha in alpha_grid]
    points = run_tasks(wrs_alpha_point, arg_list, num_cpus, debug)

    feasible = [lam for _, lam, _ in points if lam is not None]
    top = max(feasible) if feasible else None
    rows = []
    marked = False
    for alpha, (V, lam, note) in zip(alpha_grid, points):
        best = lam is not None and lam == top and not marked
        marked = marked or best
        rows.append(
            [s, alpha, V, np.nan if lam is None else float(lam), lam is not None, best, note]
        )
    return SweepResult("lambda-alpha", pd.DataFrame(rows, columns=LAMBDA_ALPHA_COLUMNS))


def time_wrs_weights(
    N, M, s_grid=DEFAULT_LAMBDA_ALPHA_S, alpha_grid=DEFAULT_ALPHA_GRID, max_cutoff=DEFAULT_MAX_WRS_CUTOFF
):
    """Time one full computation of the wrs acceptance weights per exponent.

    The threshold used for each s is the one with the best bound in
    sweep_lambda_vs_alpha. Exponents with no feasible alpha are left out.

    Returns:
        SweepResult: Columns s, alpha, V, moduli, seconds.
    """
    rows = []
    for s in _check_s_grid(s_grid):
        frame = sweep_lambda_vs_alpha(N, M, s, alpha_grid, max_cutoff, num_cpus=1).frame
        best = frame[frame["best"]]
        if best.empty:
            continue
        alpha = float(best["alpha"].iloc[0])
        iw = zipf_weights(ZipfParams(N, s, "integer"))
        cfg = WrsConfig.for_weights(iw, M, alpha)

        start = time.perf_counter()
        layer = wrs_count_table(iw, cfg.M, cfg.V)
        wrs_weights(iw, cfg, layer=layer)
        elapsed = time.perf_counter() - start
        rows.append([s, alpha, cfg.V, len(layer.moduli), elapsed])
    return SweepResult("wrs-timing", pd.DataFrame(rows, columns=TIMING_COLUMNS))


class ExperimentModel:
    """Runs the configured sweeps and saves them as CSV.

    Args:
        run_file (str): JSON settings, see experiment_settings.json.

    Attributes:
        name (str): Run name, "sortition_<YYYYMMDD>" when left empty.
        n (int): Participants.
        m (int): Committee size.
        s_grid (list): Zipf exponents for the m_max and lambda-s sweeps.
        alpha_grid (list): wrs thresholds.
        lambda_alpha_s (list): Exponents for the lambda-alpha sweep.
        seed (int): Seed of the validation selections.
        validate_trials (int): Validation selections per grid point, 0 for none.
        max_wrs_cutoff (int): Largest wrs cutoff V built.
    """

    def __init__(self, run_file):
        with open(run_file, "r") as f:
            data = json.load(f)

        if data.get("name", "") == "":
            self.name = "sortition_%s" % datetime.now().strftime("%Y%m%d")
        else:
            self.name = data["name"]

        self.n = int(data.get("n", DEFAULT_N))
        self.m = int(data.get("m", DEFAULT_M))
        self.s_grid = _check_s_grid(data.get("s_grid", DEFAULT_S_GRID))
        self.alpha_grid = _check_alpha_grid(data.get("alpha_grid", DEFAULT_ALPHA_GRID))
        self.lambda_alpha_s = _check_s_grid(data.get("lambda_alpha_s", DEFAULT_LAMBDA_ALPHA_S))
        self.seed = int(data.get("seed", 0))
        self.validate_trials = int(data.get("validate_trials", 0))
        self.max_wrs_cutoff = int(data.get("max_wrs_cutoff", DEFAULT_MAX_WRS_CUTOFF))

    def m_max(self):
        return sweep_m_max(self.n, self.s_grid, all_algorithms=True)

    def lambda_vs_s(self, num_cpus=None, debug=False):
        return sweep_lambda_vs_s(
            self.n,
            self.m,
            self.s_grid,
            self.alpha_grid,
            self.max_wrs_cutoff,
            self.validate_trials,
            self.seed,
            num_cpus,
            debug,
        )

    def lambda_vs_alpha(self, num_cpus=None, debug=False):
        frames = [
            sweep_lambda_vs_alpha(
                self.n, self.m, s, self.alpha_grid, self.max_wrs_cutoff, num_cpus, debug
            ).frame
            for s in self.lambda_alpha_s
        ]
        return SweepResult("lambda-alpha", pd.concat(frames, ignore_index=True))

    def run_model(self, save_loc=None, debug=False, num_cpus=None):
        """Run every sweep and write m_max.csv, lambda_s.csv and lambda_alpha.csv.

        Args:
            save_loc (str, optional): Output folder. Defaults to results/<name>.
            debug (bool, optional): Print progress to stderr. Defaults to False.
            num_cpus (int, optional): Workers. Defaults to PYSORTITION_NUM_CPUS.

        Returns:
            str: The output folder.
        """
        if save_loc is None:
            save_loc = "results/%s" % self.name
        if not os.path.exists(save_loc):
            os.makedirs(save_loc)

        self.m_max().to_csv(os.path.join(save_loc, "m_max.csv"))
        self.lambda_vs_s(num_cpus, debug).to_csv(os.path.join(save_loc, "lambda_s.csv"))
        self.lambda_vs_alpha(num_cpus, debug).to_csv(os.path.join(save_loc, "lambda_alpha.csv"))
        return save_loc
