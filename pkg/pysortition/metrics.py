"""
Decentralization reports and feasibility envelopes.

A selection is lambda-decentralized when no member's voting power ever
exceeds 1/lambda times its weight. An adversary holding at most lambda/2 of
the weight can then never control more than half of a committee.
"""

import numpy as np

from .constants import FEASIBILITY_RTOL
from .core import validate_weights, validate_integer_weights, check_committee_size
from .stitch import check_stitch_feasible
from .crs import crs_weights, crs_bounds
from .wrs import WrsConfig, wrs_weights, wrs_lambda_table
from .rec import rec_partition, rec_lambda

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

ALGORITHMS = ("stitch", "crs", "wrs", "rec")


def check_algorithm(algorithm):
    name = str(algorithm).lower()
    if name not in ALGORITHMS:
        raise ValueError(
            "Unknown algorithm %r, choose one of %s" % (algorithm, ", ".join(ALGORITHMS))
        )
    return name


class DecentralizationReport:
    """Decentralization of one algorithm on one input.

    Args:
        algorithm (str): stitch, crs, wrs or rec.
        lam (float): lambda, exact or a lower bound.
        lambda_kind (str): "exact" or "lower_bound".
        feasible (bool, optional): Whether the algorithm can run. Defaults to True.
        supporting (dict, optional): Algorithm-specific quantities behind lambda.

    Attributes:
        adversary_tolerance (float): lambda / 2, the largest adversary weight that can
            never reach a committee majority.
    """

    def __init__(self, algorithm, lam, lambda_kind, feasible=True, supporting=None):
        if not 0 < lam <= 1 + 1e-12:
            raise ValueError("lambda must lie in (0, 1], got %r" % lam)
        self.algorithm = algorithm
        self.lam = float(lam)
        self.lambda_kind = lambda_kind
        self.feasible = feasible
        self.adversary_tolerance = self.lam / 2
        self.supporting = supporting or {}

    def __repr__(self):
        return "DecentralizationReport(%s, lambda=%.6g, %s)" % (
            self.algorithm,
            self.lam,
            self.lambda_kind,
        )

    def to_dict(self):
        return {
            "algorithm": self.algorithm,
            "lambda": self.lam,
            "lambda_kind": self.lambda_kind,
            "feasible": self.feasible,
            "adversary_tolerance": self.adversary_tolerance,
            "details": self.supporting,
        }


def lambda_for(algorithm, w, M, alpha=None, sampling=None):
    """Decentralization report for an algorithm on given weights.

    Args:
        algorithm (str): stitch, crs, wrs or rec.
        w (WeightVector or IntegerWeightVector): Weights; wrs needs integer stakes.
        M (int): Committee size.
        alpha (float, optional): wrs cutoff fraction.
        sampling (optional): Precomputed CrsWeights, WrsWeights or RecPartition to reuse.

    Returns:
        DecentralizationReport: The report.

    Raises:
        FeasibilityError: The algorithm cannot run on these inputs.
    """
    algorithm = check_algorithm(algorithm)

    if algorithm == "wrs":
        if alpha is None:
            raise ValueError("wrs needs a cutoff fraction alpha")
        stakes = validate_integer_weights(w)
        cfg = WrsConfig.for_weights(stakes, M, alpha)
        ww = sampling if sampling is not None else wrs_weights(stakes, cfg)
        table = wrs_lambda_table(stakes, ww, cfg.M)
        i = table["argmin"]
        return DecentralizationReport(
            "wrs",
            table["lambda"],
            "lower_bound",
            supporting={
                "alpha": cfg.alpha,
                "cutoff": cfg.V,
                "total": stakes.total,
                "argmin": i,
                "F_argmin": float(table["F"][i]),
                "p_argmin": float(ww.p[i]),
                "C_min": min(ww.C),
                "C_max": max(ww.C),
                "acceptance_scale": ww.acceptance_scale,
            },
        )

    w = validate_weights(w)
    M = check_committee_size(M, w.N)
    if algorithm == "stitch":
        check_stitch_feasible(w, M)
        argmin = int(np.argmin(w.weights))
        return DecentralizationReport(
            "stitch",
            M * w.min,
            "exact",
            supporting={"argmin": argmin, "min_weight": w.min, "max_weight": w.max},
        )

    if algorithm == "crs":
        cw = sampling if sampling is not None else crs_weights(w, M)
        lower, upper = crs_bounds(w.N, M)
        return DecentralizationReport(
            "crs",
            M * w.min,
            "exact",
            supporting={
                "argmin": int(np.argmin(w.weights)),
                "min_weight": w.min,
                "interval": [lower, upper],
                "acceptance_scale": cw.acceptance_scale,
            },
        )

    part = sampling if sampling is not None else rec_partition(w, M)
    ratios = part.sorted_weights[part.starts] / part.group_powers
    return DecentralizationReport(
        "rec",
        rec_lambda(w, part),
        "exact",
        supporting={
            "extremal_group": int(np.argmin(ratios)),
            "group_sizes": list(part.group_sizes),
            "group_powers": part.group_powers.tolist(),
        },
    )


def m_max(algorithm, w):
    """Largest committee size the algorithm accepts for these weights.

    stitch: largest M with max w < 1/M (0 if none). crs: largest M with
    N > M > 2 and every weight inside the calibration interval, 1 if no such M.
    wrs and rec place no restriction and report N.

    Args:
        algorithm (str): stitch, crs, wrs or rec.
        w (WeightVector): Weights.

    Returns:
        int: M_max
    """
    algorithm = check_algorithm(algorithm)
    w = validate_weights(w)
    N = w.N

    if algorithm in ("wrs", "rec"):
        return N

    if algorithm == "stitch":
        largest = w.max
        M = min(N, int(1.0 / largest) + 1)
        while M > 0 and M * largest >= 1.0:
            M -= 1
        return M

    smallest, largest = w.min, w.max
    for M in range(N - 1, 2, -1):
        lower, upper = crs_bounds(N, M)
        if smallest >= lower * (1 - FEASIBILITY_RTOL) and largest <= upper * (
            1 + FEASIBILITY_RTOL
        ):
            return M
    return 1


def power_ratio(outcome, w):
    """Largest voting_power(n) / w_n over the committee."""
    weights = validate_weights(w).weights
    return max(power / weights[n] for n, power in outcome.voting_power.items())
