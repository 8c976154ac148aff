"""
Cumulative rejection sampling.

Uniform M-subsets are proposed and accepted with probability proportional to
the sum of per-participant acceptance weights p_i. The affine calibration

    p_i = M(N-1)/(N-M) * w_i - (M-1)/(N-M)

makes each participant's inclusion probability M*w_i, so with equal seat
power 1/M the scheme is fair. It only works when every p_i lands in
[0, 1/M], which confines the weights to a narrow band around 1/N.
"""

import warnings

import numpy as np

from .constants import DEFAULT_MAX_ROUNDS, FEASIBILITY_RTOL, SLOW_ACCEPTANCE
from .core import validate_weights, check_committee_size, draw_subset, SelectionOutcome
from .errors import InfeasibleWeights, RejectionBudgetExhausted

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


def crs_bounds(N, M):
    """Closed interval every normalized weight must lie in.

    Returns:
        tuple: (lower, upper)
    """
    lower = (M - 1) / (M * (N - 1))
    upper = (N - 2 * M + M * M) / (M * M * (N - 1))
    return lower, upper


class CrsFeasibility:
    """Verdict of crs_feasible. Truthy when feasible.

    Attributes:
        ok (bool): Feasible or not.
        diagnostic (str): Empty when feasible, otherwise which index breaks which bound.
        index (int): First violating participant, None if the sizes are at fault or all is well.
        bound (str): "lower", "upper", "size" or None.
        interval (tuple): (lower, upper) when N > M > 2, else None.
    """

    def __init__(self, ok, diagnostic="", index=None, bound=None, interval=None):
        self.ok = ok
        self.diagnostic = diagnostic
        self.index = index
        self.bound = bound
        self.interval = interval

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "CrsFeasibility(ok=%s, %r)" % (self.ok, self.diagnostic)


def crs_feasible(w, M):
    """Check whether cumulative rejection sampling can run.

    Needs N > M > 2 and every w_i inside crs_bounds(N, M).

    Args:
        w (WeightVector): Weights.
        M (int): Committee size.

    Returns:
        CrsFeasibility: Verdict with a diagnostic naming the first violation.
    """
    w = validate_weights(w)
    N = w.N
    if not N > M > 2:
        return CrsFeasibility(
            False,
            "Cumulative rejection sampling requires N > M > 2, got N=%s, M=%s" % (N, M),
            bound="size",
        )

    lower, upper = crs_bounds(N, M)
    below = np.flatnonzero(w.weights < lower * (1 - FEASIBILITY_RTOL))
    above = np.flatnonzero(w.weights > upper * (1 + FEASIBILITY_RTOL))
    first_below = int(below[0]) if below.size else N
    first_above = int(above[0]) if above.size else N

    if first_below < first_above:
        return CrsFeasibility(
            False,
            "Weight %.12g of participant %s is below the lower bound (M-1)/(M(N-1)) = %.12g"
            " (allowed interval [%.12g, %.12g])"
            % (w.weights[first_below], first_below, lower, lower, upper),
            index=first_below,
            bound="lower",
            interval=(lower, upper),
        )
    if first_above < N:
        return CrsFeasibility(
            False,
            "Weight %.12g of participant %s is above the upper bound (N-2M+M^2)/(M^2(N-1)) = %.12g"
            " (allowed interval [%.12g, %.12g])"
            % (w.weights[first_above], first_above, upper, lower, upper),
            index=first_above,
            bound="upper",
            interval=(lower, upper),
        )
    return CrsFeasibility(True, interval=(lower, upper))


class CrsWeights:
    """Acceptance weights for cumulative rejection sampling.

    Attributes:
        p (numpy.ndarray): Per-participant acceptance weights, each in [0, 1/M], summing to 1.
        acceptance_scale (float): Sum of the M largest p_i, the largest weight any M-subset can have.
        M (int): Committee size they were calibrated for.
    """

    def __init__(self, p, M):
        p = np.asarray(p, dtype=np.float64)
        p.setflags(write=False)
        self.p = p
        self.M = M
        self.acceptance_scale = float(np.sort(p)[-M:].sum())

    @property
    def acceptance_rate(self):
        """Average probability that one round accepts."""
        return (self.M / len(self.p)) / self.acceptance_scale


def crs_weights(w, M):
    """Calibrate acceptance weights.

    Args:
        w (WeightVector): Weights.
        M (int): Committee size.

    Returns:
        CrsWeights: p_i and the acceptance scale.

    Raises:
        InfeasibleWeights: crs_feasible fails; carries its diagnostic.
    """
    w = validate_weights(w)
    verdict = crs_feasible(w, M)
    if not verdict:
        raise InfeasibleWeights(verdict.diagnostic, verdict.index)

    N = w.N
    p = M * (N - 1) / (N - M) * w.weights - (M - 1) / (N - M)
    p = np.clip(p, 0.0, 1.0 / M)  # rounding at the interval ends
    weights = CrsWeights(p, M)
    if weights.acceptance_rate < SLOW_ACCEPTANCE:
        warnings.warn(
            "Each rejection round accepts with probability %.3g, selection will be slow"
            % weights.acceptance_rate
        )
    return weights


def crs_select(w, M, stream, max_rounds=DEFAULT_MAX_ROUNDS, weights=None):
    """Select a committee by cumulative rejection sampling.

    Each round draws a uniform M-subset (M draws) then U uniform on
    [0, acceptance_scale) (one draw) and accepts iff U < sum of p over the subset.

    Args:
        w (WeightVector): Weights.
        M (int): Committee size.
        stream (PrngStream): Randomness.
        max_rounds (int, optional): Round budget. Defaults to 100000.
        weights (CrsWeights, optional): Precomputed crs_weights(w, M).

    Returns:
        SelectionOutcome: M members with power 1/M each; `rounds` records the rounds used.

    Raises:
        InfeasibleWeights: The weights cannot be calibrated.
        RejectionBudgetExhausted: Every round rejected.
    """
    w = validate_weights(w)
    M = check_committee_size(M, w.N)
    if max_rounds < 1:
        raise ValueError("max_rounds must be at least 1, got %s" % max_rounds)
    if weights is None:
        weights = crs_weights(w, M)

    for rounds in range(1, max_rounds + 1):
        subset = draw_subset(stream, w.N, M)
        u = stream.unit() * weights.acceptance_scale
        if u < weights.p[subset].sum():
            return SelectionOutcome(subset, np.ones(M), algorithm="crs", rounds=rounds)
    raise RejectionBudgetExhausted(max_rounds)
