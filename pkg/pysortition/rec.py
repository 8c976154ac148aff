"""
Representative electoral college.

Participants are sorted by weight and cut into M consecutive groups of
nearly equal size. Each group elects one representative with probability
proportional to weight inside the group, and the representative carries the
whole group's weight as voting power. Every participant's expected power is
then exactly its weight, with no restriction on M.
"""

import numpy as np

from .core import validate_weights, check_committee_size, SelectionOutcome

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


def group_sizes(N, M):
    """Sizes N_m = N // M + 1(N mod M >= m) for m = 1..M."""
    return tuple(N // M + (1 if N % M >= m else 0) for m in range(1, M + 1))


class RecPartition:
    """Weight-sorted split of the participants into M groups.

    Attributes:
        order (numpy.ndarray): Participant indices sorted by (weight, index).
        group_sizes (tuple): N_m per group.
        starts (numpy.ndarray): Offset of each group in `order`.
        groups (list): Participant indices of each group, as arrays.
        group_powers (numpy.ndarray): p_m, total weight of each group.
        sorted_weights (numpy.ndarray): Weights in `order`.
        cumulative_weights (numpy.ndarray): Running sum of `sorted_weights`.
    """

    def __init__(self, order, sizes, sorted_weights):
        self.order = order
        self.group_sizes = tuple(int(s) for s in sizes)
        self.starts = np.concatenate(([0], np.cumsum(self.group_sizes)[:-1])).astype(np.int64)
        self.sorted_weights = sorted_weights
        self.groups = [
            order[start : start + size] for start, size in zip(self.starts, self.group_sizes)
        ]
        self.group_powers = np.add.reduceat(sorted_weights, self.starts)
        self.cumulative_weights = np.cumsum(sorted_weights)

    @property
    def M(self):
        return len(self.group_sizes)

    def group_of(self, index):
        """Group number (0-based) that participant `index` belongs to."""
        position = int(np.flatnonzero(self.order == index)[0])
        return int(np.searchsorted(self.starts, position, side="right") - 1)


def rec_partition(w, M):
    """Sort by (weight, index) and split into M groups.

    Args:
        w (WeightVector): Weights.
        M (int): Number of groups, 1 <= M <= N.

    Returns:
        RecPartition: The groups and their powers.

    Raises:
        SizeExceedsPopulation: M > N.
    """
    w = validate_weights(w)
    M = check_committee_size(M, w.N)
    order = np.lexsort((np.arange(w.N), w.weights))
    return RecPartition(order, group_sizes(w.N, M), w.weights[order])


def rec_select(w, M, stream, partition=None):
    """Elect one representative per group.

    Group m uses draw m (in order), scaled to the group's weight and looked up
    against the group's cumulative weights.

    Args:
        w (WeightVector): Weights.
        M (int): Committee size.
        stream (PrngStream): Randomness, advanced by M draws.
        partition (RecPartition, optional): Precomputed rec_partition(w, M).

    Returns:
        SelectionOutcome: One member per group, each with power p_m.
    """
    w = validate_weights(w)
    if partition is None:
        partition = rec_partition(w, M)

    cumulative = partition.cumulative_weights
    starts = partition.starts
    ends = starts + np.array(partition.group_sizes)
    base = np.where(starts > 0, cumulative[starts - 1], 0.0)

    targets = base + stream.units(partition.M) * partition.group_powers
    positions = np.searchsorted(cumulative, targets, side="right")
    positions = np.clip(positions, starts, ends - 1)
    return SelectionOutcome(
        partition.order[positions], partition.group_powers, algorithm="rec"
    )


def rec_lambda(w, part):
    """Exact decentralization: min over groups of (lightest member weight) / p_m.

    Args:
        w (WeightVector): Weights the partition was built from.
        part (RecPartition): The partition.

    Returns:
        float: lambda
    """
    lightest = part.sorted_weights[part.starts]
    return float(np.min(lightest / part.group_powers))
