"""
Brute-force ground truth for small instances.

Every function here enumerates committees directly instead of using the fast
paths in stitch, crs, wrs and rec, so the two can be checked against each
other. They refuse instances above fixed size caps.
"""

import itertools
from fractions import Fraction

import numpy as np

from .constants import (
    MAX_ENUMERATION_N,
    MAX_STITCH_ENUMERATION_N,
    MAX_PRODUCT_ENUMERATION,
)
from .core import validate_weights, validate_integer_weights, check_committee_size
from .errors import TooLargeForEnumeration, InfeasibleAlpha
from .stitch import check_stitch_feasible
from .crs import crs_weights
from .rec import rec_partition

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


class ExactLaw:
    """Exact distribution of the committee.

    Args:
        N (int): Population size.
        support (list): (committee, probability, powers) triples. committee is a frozenset,
            powers maps member index -> voting power.
        exact_expected_power (list of Fraction, optional): Exact expected powers when the
            law was computed in rational arithmetic.

    Attributes:
        support (list): As given.
        expected_power (numpy.ndarray): Expected voting power per participant.
    """

    def __init__(self, N, support, exact_expected_power=None):
        self.N = N
        self.support = support
        self.exact_expected_power = exact_expected_power
        expected = np.zeros(N)
        for committee, probability, powers in support:
            for index, power in powers.items():
                expected[index] += float(probability) * float(power)
        self.expected_power = expected

    def __len__(self):
        return len(self.support)

    def __repr__(self):
        return "ExactLaw(N=%s, committees=%s)" % (self.N, len(self.support))

    def committee_probabilities(self):
        """Committee -> probability, merging repeated committees."""
        probabilities = {}
        for committee, probability, _ in self.support:
            probabilities[committee] = probabilities.get(committee, 0) + probability
        return probabilities

    @property
    def total_probability(self):
        return sum(float(p) for _, p, _ in self.support)


def _check_size(N, cap, what="N"):
    if N > cap:
        raise TooLargeForEnumeration(N, cap, what)


def enumerate_crs_law(w, M):
    """Law of cumulative rejection sampling: P(S) proportional to sum of p over S.

    Args:
        w (WeightVector): Weights, N <= 15.
        M (int): Committee size.

    Returns:
        ExactLaw: Every M-subset with its probability, members at power 1/M.
    """
    w = validate_weights(w)
    _check_size(w.N, MAX_ENUMERATION_N)
    p = crs_weights(w, M).p

    committees = list(itertools.combinations(range(w.N), M))
    masses = [sum(p[j] for j in committee) for committee in committees]
    total = sum(masses)
    support = []
    for committee, mass in zip(committees, masses):
        if mass > 0:
            support.append(
                (frozenset(committee), mass / total, {j: 1.0 / M for j in committee})
            )
    return ExactLaw(w.N, support)


def brute_force_counts(iw, M, V):
    """C_i by listing every M-subset: how many with stake >= V contain i."""
    iw = validate_integer_weights(iw)
    _check_size(iw.N, MAX_ENUMERATION_N)
    stakes = [int(x) for x in iw.raw_weights]
    counts = [0] * iw.N
    for committee in itertools.combinations(range(iw.N), M):
        if sum(stakes[j] for j in committee) >= V:
            for j in committee:
                counts[j] += 1
    return counts


def brute_force_count_table(iw, M, V):
    """{(v, k): number of k-subsets with stake sum v} for v < V, k <= M. Zero entries omitted."""
    iw = validate_integer_weights(iw)
    _check_size(iw.N, MAX_ENUMERATION_N)
    stakes = [int(x) for x in iw.raw_weights]
    table = {}
    for k in range(M + 1):
        for subset in itertools.combinations(range(iw.N), k):
            v = sum(stakes[j] for j in subset)
            if v < V:
                table[(v, k)] = table.get((v, k), 0) + 1
    return table


def enumerate_wrs_law(iw, cfg):
    """Law of weighted rejection sampling in exact rational arithmetic.

    C_i comes from brute_force_counts, p_i = w_i / C_i, and an eligible
    committee S has probability proportional to sum of p over S.

    Args:
        iw (IntegerWeightVector): Stakes, N <= 15.
        cfg (WrsConfig): Committee size and cutoff.

    Returns:
        ExactLaw: Eligible committees with Fraction probabilities and powers.

    Raises:
        InfeasibleAlpha: Some participant is in no eligible committee.
    """
    iw = validate_integer_weights(iw)
    _check_size(iw.N, MAX_ENUMERATION_N)
    M = check_committee_size(cfg.M, iw.N)
    stakes = [int(x) for x in iw.raw_weights]

    counts = brute_force_counts(iw, M, cfg.V)
    for i, count in enumerate(counts):
        if count == 0:
            raise InfeasibleAlpha(i, cfg.V)
    ratios = [Fraction(s, c) for s, c in zip(stakes, counts)]

    eligible = [
        committee
        for committee in itertools.combinations(range(iw.N), M)
        if sum(stakes[j] for j in committee) >= cfg.V
    ]
    masses = [sum((ratios[j] for j in committee), Fraction(0)) for committee in eligible]
    total = sum(masses, Fraction(0))

    support = []
    expected = [Fraction(0)] * iw.N
    for committee, mass in zip(eligible, masses):
        probability = mass / total
        powers = {j: ratios[j] / mass for j in committee}
        for j, power in powers.items():
            expected[j] += probability * power
        support.append((frozenset(committee), probability, powers))
    return ExactLaw(iw.N, support, exact_expected_power=expected)


def enumerate_rec_law(w, M):
    """Law of the representative electoral college: independent draws per group.

    Args:
        w (WeightVector): Weights, with the product of group sizes at most 10**6.
        M (int): Number of groups.

    Returns:
        ExactLaw: One entry per combination of representatives.
    """
    w = validate_weights(w)
    part = rec_partition(w, M)
    size = int(np.prod([float(s) for s in part.group_sizes]))
    _check_size(size, MAX_PRODUCT_ENUMERATION, "product of group sizes")

    weights = w.weights
    powers = part.group_powers
    total_power = float(powers.sum())
    choices = [
        [(int(i), weights[i] / powers[m]) for i in group] for m, group in enumerate(part.groups)
    ]
    support = []
    for pick in itertools.product(*choices):
        probability = 1.0
        for _, q in pick:
            probability *= q
        committee = {i: powers[m] / total_power for m, (i, _) in enumerate(pick)}
        support.append((frozenset(committee), probability, committee))
    return ExactLaw(w.N, support)


def stitch_law_by_breakpoints(w, M):
    """Law of the stitch over a uniform start point, without permutation.

    Interval ends are reduced mod 1/M and sorted; between two consecutive
    breakpoints the committee is constant. Each piece is evaluated at its
    midpoint by scanning the intervals one by one.

    Args:
        w (WeightVector): Weights, N <= 64, every entry below 1/M.
        M (int): Committee size.

    Returns:
        ExactLaw: One entry per piece, probability = piece length * M.
    """
    w = validate_weights(w)
    _check_size(w.N, MAX_STITCH_ENUMERATION_N)
    M = check_committee_size(M, w.N)
    check_stitch_feasible(w, M)

    step = 1.0 / M
    edges = [0.0]
    running = 0.0
    for weight in w.weights:
        running += float(weight)
        edges.append(running)
    edges[-1] = 1.0

    breakpoints = sorted(set([0.0] + [e % step for e in edges[1:-1]]))
    breakpoints.append(step)

    support = []
    for start, end in zip(breakpoints[:-1], breakpoints[1:]):
        if end <= start:
            continue
        x = 0.5 * (start + end)
        members = []
        for k in range(M):
            point = x + k * step
            for i in range(w.N):
                if edges[i] <= point < edges[i + 1]:
                    members.append(i)
                    break
        support.append((frozenset(members), (end - start) * M, {i: step for i in members}))
    return ExactLaw(w.N, support)


def worst_power_ratio(law, w):
    """Largest voting power / weight over every committee in the support."""
    weights = validate_weights(w).weights
    worst = 0.0
    for _, probability, powers in law.support:
        if probability == 0:
            continue
        for index, power in powers.items():
            worst = max(worst, float(power) / weights[index])
    return worst


def total_variation(law, frequencies):
    """Total variation distance between the law and observed committee frequencies.

    Args:
        law (ExactLaw): Reference law.
        frequencies (dict): Committee (frozenset) -> count or probability.

    Returns:
        float: Half the L1 distance.
    """
    observed_total = float(sum(frequencies.values()))
    expected = {c: float(p) for c, p in law.committee_probabilities().items()}
    distance = 0.0
    for committee in set(expected) | set(frequencies):
        distance += abs(
            expected.get(committee, 0.0) - frequencies.get(committee, 0) / observed_total
        )
    return 0.5 * distance
