"""
Weighted rejection sampling.

Like cumulative rejection sampling, uniform M-subsets are proposed and
accepted with probability proportional to the sum of acceptance weights
p_i, but a subset is only eligible when its integer stake reaches the
cutoff V = ceil(alpha * W). Fairness then needs p_i proportional to
w_i / C_i, where C_i counts the eligible M-subsets containing i.

The counts come from the subset-sum table D[v, k] (number of k-subsets of
all participants with stake sum exactly v, for v < V) and the identity

    q = sum_{m=0..M} (-1)^m sum_{v < V - m*w_i} D[v, M-m]

which counts the ineligible M-subsets that leave i out. Then the ineligible
subsets containing i number sum_{v<V} D[v, M] - q, and C_i is C(N-1, M-1)
minus that.

Counts reach C(N, M), far beyond 64 bits at N=1000, M=20. The table is kept
as residues modulo a handful of primes below 2**31 (vectorised int64
arithmetic) and exact integers are rebuilt by the Chinese remainder theorem.
"""

import math
import sys
import time
import warnings
from fractions import Fraction

import numpy as np
from scipy.special import comb

from .constants import DEFAULT_MAX_ROUNDS, COUNT_MODULI, LAZY_REDUCTION_STEPS, SLOW_ACCEPTANCE
from .core import validate_integer_weights, check_committee_size, draw_subset, SelectionOutcome
from .errors import (
    InfeasibleAlpha,
    RejectionBudgetExhausted,
    CountCapacityExceeded,
)

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


def exact_alpha(alpha):
    """alpha as a Fraction, reading floats by their shortest decimal form (0.1 -> 1/10)."""
    if isinstance(alpha, Fraction):
        return alpha
    if isinstance(alpha, (int, np.integer)):
        return Fraction(int(alpha))
    if isinstance(alpha, str):
        return Fraction(alpha)
    return Fraction(repr(float(alpha)))


def wrs_cutoff(alpha, total):
    """Integer cutoff V = ceil(alpha * W).

    Args:
        alpha (float, str or Fraction): Threshold fraction in (0, 1).
        total (int): Total integer stake W.

    Returns:
        int: V
    """
    alpha = exact_alpha(alpha)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie strictly between 0 and 1, got %s" % alpha)
    return max(1, math.ceil(alpha * total))


class WrsConfig:
    """Settings for weighted rejection sampling.

    Args:
        M (int): Committee size.
        alpha (float): Stake threshold as a fraction of the total, in (0, 1).
        total (int): Total integer stake W the cutoff is taken of.

    Attributes:
        M (int): Committee size.
        alpha (float): Threshold fraction.
        total (int): W.
        V (int): ceil(alpha * W). Subsets with stake below V are never accepted.
    """

    def __init__(self, M, alpha, total):
        if int(M) != M or M < 1:
            raise ValueError("Committee size must be a positive integer, got %r" % M)
        self.M = int(M)
        self.alpha = float(alpha)
        self.total = int(total)
        self.V = wrs_cutoff(alpha, self.total)

    @classmethod
    def for_weights(cls, iw, M, alpha):
        return cls(M, alpha, validate_integer_weights(iw).total)

    def __repr__(self):
        return "WrsConfig(M=%s, alpha=%s, V=%s)" % (self.M, self.alpha, self.V)


class WrsFeasibility:
    """Verdict of wrs_strong_feasible. Truthy when every C_i > 0.

    Attributes:
        ok (bool): Strongly feasible.
        index (int): First participant no eligible committee contains, None if the
            whole configuration fails or all is well.
        best (int): Largest stake of a committee containing `index` (or of any committee).
    """

    def __init__(self, ok, index=None, best=None):
        self.ok = ok
        self.index = index
        self.best = best

    def __bool__(self):
        return self.ok

    def error(self, V):
        return InfeasibleAlpha(self.index, V, self.best)


def wrs_strong_feasible(iw, M, V):
    """Closed-form check that every participant is in some eligible committee.

    The heaviest committee containing i is i plus the M-1 heaviest others.

    Args:
        iw (IntegerWeightVector): Stakes.
        M (int): Committee size.
        V (int): Cutoff.

    Returns:
        WrsFeasibility: Verdict.
    """
    iw = validate_integer_weights(iw)
    M = check_committee_size(M, iw.N)
    w = iw.raw_weights
    order = np.argsort(-w, kind="stable")
    top = [int(x) for x in w[order[:M]]]
    top_m = sum(top)
    if top_m < V:
        return WrsFeasibility(False, None, top_m)

    top_m_less_one = top_m - top[-1]
    rank = np.empty(iw.N, dtype=np.int64)
    rank[order] = np.arange(iw.N)
    for i in range(iw.N):
        best = top_m if rank[i] < M else int(w[i]) + top_m_less_one
        if best < V:
            return WrsFeasibility(False, i, best)
    return WrsFeasibility(True)


class _ResidueBasis:
    # Chinese remainder reconstruction for a fixed set of coprime moduli.
    def __init__(self, moduli):
        self.moduli = tuple(int(m) for m in moduli)
        self.modulus = math.prod(self.moduli)
        self.coefficients = []
        for m in self.moduli:
            rest = self.modulus // m
            self.coefficients.append(rest * pow(rest, -1, m))
        self.array = np.array(self.moduli, dtype=np.int64)

    def reconstruct(self, residues):
        return sum(int(r) * c for r, c in zip(residues, self.coefficients)) % self.modulus

    def residues_of(self, value):
        return np.array([value % m for m in self.moduli], dtype=np.int64)


def _basis_for(N, M):
    # Every count handled is at most max_k C(N, k), k <= M.
    bound = int(comb(N, min(M, N // 2), exact=True))
    needed = bound.bit_length() + 1
    product = 1
    for used, modulus in enumerate(COUNT_MODULI, start=1):
        product *= modulus
        if product > bound:
            return _ResidueBasis(COUNT_MODULI[:used])
    raise CountCapacityExceeded(needed, product.bit_length() - 1)


class SubsetCountLayer:
    """Exact subset-sum counts D[v, k] for v < V, k <= M over all N participants.

    Stored as residues; exact values come out as Python ints.

    Attributes:
        N (int): Participants counted.
        M (int): Largest subset size.
        V (int): Cutoff, the table covers sums 0..V-1.
        residues (numpy.ndarray): int64 array of shape (moduli, M+1, V).
        moduli (tuple): The residue moduli.
        build_seconds (float): Wall time spent building the table.
    """

    def __init__(self, residues, basis, N, M, V, build_seconds=0.0):
        self.residues = residues
        self.basis = basis
        self.moduli = basis.moduli
        self.N = N
        self.M = M
        self.V = V
        self.build_seconds = build_seconds
        self._prefix = None

    def count(self, v, k):
        """Exact number of k-subsets with stake sum v (0 when v >= V)."""
        if not (0 <= k <= self.M) or v < 0 or v >= self.V:
            return 0
        return self.basis.reconstruct(self.residues[:, k, v])

    @property
    def counts(self):
        """The whole table as an object array of Python ints, indexed [v, k]. Small tables only."""
        table = np.empty((self.V, self.M + 1), dtype=object)
        for v in range(self.V):
            for k in range(self.M + 1):
                table[v, k] = self.basis.reconstruct(self.residues[:, k, v])
        return table

    def prefix_residues(self):
        """Residues of sum_{u <= v} D[u, k], same shape as `residues`."""
        if self._prefix is None:
            prefix = np.cumsum(self.residues, axis=2)
            np.remainder(prefix, self.basis.array.reshape(-1, 1, 1), out=prefix)
            self._prefix = prefix
        return self._prefix

    def below_cutoff(self, k):
        """Exact number of k-subsets with stake sum below V."""
        return self.basis.reconstruct(self.prefix_residues()[:, k, self.V - 1])


def wrs_count_table(iw, M, V, debug=False):
    """Build the subset-sum count table D[v, k], v < V, k <= M.

    Runs the recurrence D[v, k] += D[v - w_i, k - 1] participant by
    participant, keeping only the current layer. Participants are folded in
    ascending stake order (the final counts do not depend on the order) so
    rows only need updating up to the largest sum reachable so far.

    Args:
        iw (IntegerWeightVector): Stakes.
        M (int): Largest subset size.
        V (int): Cutoff, at least 1.
        debug (bool, optional): Print table size and build time to stderr. Defaults to False.

    Returns:
        SubsetCountLayer: The final layer.
    """
    iw = validate_integer_weights(iw)
    M = check_committee_size(M, iw.N)
    V = int(V)
    if V < 1:
        raise ValueError("Cutoff V must be at least 1, got %s" % V)

    start = time.perf_counter()
    basis = _basis_for(iw.N, M)
    moduli = basis.array.reshape(-1, 1, 1)
    table = np.zeros((len(basis.moduli), M + 1, V), dtype=np.int64)
    table[:, 0, 0] = 1
    reach = [0] * (M + 1)  # reach[k]: one past the largest sum with a nonzero count in row k
    reach[0] = 1

    pending = 0
    for weight in np.sort(iw.raw_weights):
        weight = int(weight)
        if weight >= V:
            break  # this and every later participant only makes sums >= V
        for k in range(M, 0, -1):
            end = min(V, reach[k - 1] + weight)
            if reach[k - 1] == 0 or end <= weight:
                continue
            table[:, k, weight:end] += table[:, k - 1, : end - weight]
            reach[k] = max(reach[k], end)
        pending += 1
        if pending == LAZY_REDUCTION_STEPS:
            np.remainder(table, moduli, out=table)
            pending = 0
    np.remainder(table, moduli, out=table)

    elapsed = time.perf_counter() - start
    if debug:
        print(
            "Count table N={} M={} V={} with {} moduli built in {:.2f} s".format(
                iw.N, M, V, len(basis.moduli), elapsed
            ),
            file=sys.stderr,
        )
    return SubsetCountLayer(table, basis, iw.N, M, V, build_seconds=elapsed)


def wrs_counts_per_participant(iw, M, V, layer=None):
    """Exact C_i: eligible M-subsets (stake >= V) containing participant i.

    Args:
        iw (IntegerWeightVector): Stakes.
        M (int): Committee size.
        V (int): Cutoff.
        layer (SubsetCountLayer, optional): wrs_count_table(iw, M, V), built if not given.

    Returns:
        list: C_i as Python ints.

    Raises:
        InfeasibleAlpha: Some C_i is zero.
    """
    iw = validate_integer_weights(iw)
    M = check_committee_size(M, iw.N)
    if layer is None:
        layer = wrs_count_table(iw, M, V)
    if (layer.N, layer.M, layer.V) != (iw.N, M, V):
        raise ValueError("Count table was built for different inputs")

    basis = layer.basis
    moduli = basis.array.reshape(-1, 1)
    prefix = layer.prefix_residues()
    w = iw.raw_weights.astype(np.int64)

    # Ineligible M-subsets that leave i out, for every i at once
    left_out = np.zeros((len(basis.moduli), iw.N), dtype=np.int64)
    for m in range(M + 1):
        last = V - m * w - 1
        inside = last >= 0
        if not inside.any():
            break
        partial = prefix[:, M - m, np.where(inside, last, 0)]
        partial = np.where(inside, partial, 0)
        if m % 2:
            left_out -= partial
        else:
            left_out += partial
        np.remainder(left_out, moduli, out=left_out)

    ineligible = prefix[:, M, V - 1].reshape(-1, 1)
    with_i = basis.residues_of(int(comb(iw.N - 1, M - 1, exact=True))).reshape(-1, 1)
    counts_res = np.remainder(with_i - (ineligible - left_out), moduli)

    counts = [basis.reconstruct(counts_res[:, i]) for i in range(iw.N)]
    for i, count in enumerate(counts):
        if count == 0:
            raise InfeasibleAlpha(i, V)
    return counts


class WrsWeights:
    """Acceptance weights for weighted rejection sampling.

    Args:
        counts (list of int): C_i for every participant.
        raw_weights (array-like): Integer stakes.
        M (int): Committee size.

    Attributes:
        C (tuple): Exact C_i.
        ratios (tuple): Exact w_i / C_i as Fractions (p before normalization).
        p (numpy.ndarray): Normalized acceptance weights.
        acceptance_scale (float): Sum of the M largest p_i.
        acceptance_rate (float): Exact probability that one round accepts.
        M (int): Committee size.
    """

    def __init__(self, counts, raw_weights, M):
        self.C = tuple(int(c) for c in counts)
        raw = [int(x) for x in raw_weights]
        self.M = int(M)
        self.ratios = tuple(Fraction(w, c) for w, c in zip(raw, self.C))

        largest = max(self.C)
        scaled = np.array([w * largest / c for w, c in zip(raw, self.C)])
        p = scaled / scaled.sum()
        p.setflags(write=False)
        self.p = p
        self.acceptance_scale = float(np.sort(p)[-self.M :].sum())

    @property
    def acceptance_rate(self):
        """Probability that one round accepts: sum of p_i * C_i over C(N, M) * acceptance_scale."""
        committees = int(comb(len(self.C), self.M, exact=True))
        shares = np.array([c / committees for c in self.C])
        return float(self.p @ shares) / self.acceptance_scale


def wrs_weights(iw, cfg, layer=None, debug=False):
    """Acceptance weights p_i proportional to w_i / C_i.

    Args:
        iw (IntegerWeightVector): Stakes.
        cfg (WrsConfig): Committee size and cutoff.
        layer (SubsetCountLayer, optional): Prebuilt count table.
        debug (bool, optional): Passed to wrs_count_table. Defaults to False.

    Returns:
        WrsWeights: Counts, p and acceptance scale. Warns when rounds accept less often than 1e-4.

    Raises:
        InfeasibleAlpha: Some participant is in no eligible committee.
    """
    iw = validate_integer_weights(iw)
    M = check_committee_size(cfg.M, iw.N)
    if cfg.total != iw.total:
        raise ValueError(
            "Config cutoff was computed for total %s but the stakes total %s"
            % (cfg.total, iw.total)
        )

    verdict = wrs_strong_feasible(iw, M, cfg.V)
    if not verdict:
        raise verdict.error(cfg.V)
    if layer is None:
        layer = wrs_count_table(iw, M, cfg.V, debug=debug)
    counts = wrs_counts_per_participant(iw, M, cfg.V, layer)
    weights = WrsWeights(counts, iw.raw_weights, M)
    if weights.acceptance_rate < SLOW_ACCEPTANCE:
        warnings.warn(
            "Each rejection round accepts with probability %.3g, selection will be slow"
            % weights.acceptance_rate
        )
    return weights


def wrs_select(iw, cfg, ww, stream, max_rounds=DEFAULT_MAX_ROUNDS):
    """Select a committee by weighted rejection sampling.

    Each round draws a uniform M-subset (M draws) then U on [0, acceptance_scale)
    (one draw), and accepts iff the subset's stake reaches V and U < sum of p over it.
    Members get raw weight p_m, so their voting powers differ.

    Args:
        iw (IntegerWeightVector): Stakes.
        cfg (WrsConfig): Committee size and cutoff.
        ww (WrsWeights): wrs_weights(iw, cfg).
        stream (PrngStream): Randomness.
        max_rounds (int, optional): Round budget. Defaults to 100000.

    Returns:
        SelectionOutcome: The accepted committee.

    Raises:
        RejectionBudgetExhausted: Every round rejected.
    """
    iw = validate_integer_weights(iw)
    M = check_committee_size(cfg.M, iw.N)
    if max_rounds < 1:
        raise ValueError("max_rounds must be at least 1, got %s" % max_rounds)

    stakes = iw.raw_weights
    for rounds in range(1, max_rounds + 1):
        subset = draw_subset(stream, iw.N, M)
        u = stream.unit() * ww.acceptance_scale
        if int(stakes[subset].sum()) >= cfg.V and u < ww.p[subset].sum():
            return SelectionOutcome(subset, ww.p[subset], algorithm="wrs", rounds=rounds)
    raise RejectionBudgetExhausted(max_rounds)


def _exact_weights(w):
    # Normalized weights as Fractions: exact for stakes, the float values otherwise.
    if hasattr(w, "raw_weights"):
        return [Fraction(int(x), w.total) for x in w.raw_weights]
    return [Fraction(float(x)) for x in w.weights]


def wrs_lambda_table(w, ww, M):
    """Decentralization bound of weighted rejection sampling, with its ingredients.

    For every i, F_i is the sum of the M-1 smallest p_j over j != i and the
    bound is min_i w_i (1 + F_i / p_i). Evaluated with exact fractions, so equal
    bounds from different cutoffs compare equal.

    Args:
        w (IntegerWeightVector or WeightVector): The weights.
        ww (WrsWeights): Acceptance weights.
        M (int): Committee size.

    Returns:
        dict: "lambda" (float), "exact" (Fraction), "argmin" (int), "F" (numpy.ndarray of
        normalized F_i).
    """
    ratios = ww.ratios
    N = len(ratios)
    weights = _exact_weights(w)
    total_ratio = math.fsum(float(r) for r in ratios)

    smallest = sorted(range(N), key=lambda j: (ratios[j], j))[:M]
    lightest = set(smallest[: M - 1])
    sum_less_one = sum((ratios[j] for j in smallest[: M - 1]), Fraction(0))
    sum_m = sum_less_one + ratios[smallest[M - 1]]

    best = None
    argmin = None
    F = np.empty(N)
    for i in range(N):
        f_i = sum_m - ratios[i] if i in lightest else sum_less_one
        F[i] = float(f_i) / total_ratio
        bound = weights[i] * (1 + f_i / ratios[i])
        if best is None or bound < best:
            best = bound
            argmin = i
    return {"lambda": float(best), "exact": best, "argmin": argmin, "F": F}


def wrs_lambda_bound(w, ww, M):
    """Lower bound on the decentralization of weighted rejection sampling.

    Args:
        w (IntegerWeightVector or WeightVector): The weights.
        ww (WrsWeights): Acceptance weights.
        M (int): Committee size.

    Returns:
        float: min_i w_i (1 + F_i / p_i)
    """
    return wrs_lambda_table(w, ww, M)["lambda"]
