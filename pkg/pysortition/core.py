"""
Shared data model: weight vectors, selection outcomes, uniform subset sampling and weight files.

Participants are identified by their position in the input (0-based). Weight
files are CSVs with the header `id,weight`; the row order defines the index,
the `id` column is carried along for reporting only.
"""

import warnings
import numbers

import numpy as np
import pandas as pd

from .constants import NORMALIZATION_TOL
from .errors import EmptyInput, NonPositiveWeight, SizeExceedsPopulation, InvalidInput

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


def warning_on_one_line(message, category, filename, lineno, file=None, line=None):
    """One line warning format, "file:line: Category:message".

    Args:
        message (Warning or str): The warning.
        category (type): Warning class.
        filename (str): File that raised it.
        lineno (int): Line that raised it.
        file (file, optional): Unused. Defaults to None.
        line (str, optional): Unused. Defaults to None.

    Returns:
        str: Formatted warning.
    """
    return "%s:%s: %s:%s\n" % (filename, lineno, category.__name__, message)


warnings.formatwarning = warning_on_one_line


class WeightVector:
    """Normalized, strictly positive participant weights.

    Args:
        raw (array-like): Positive weights in any units, renormalized to sum to one.

    Attributes:
        weights (numpy.ndarray): Read-only normalized weights, index order preserved.
        N (int): Number of participants.
    """

    def __init__(self, raw):
        values = np.array(raw, dtype=np.float64).ravel()
        if values.size == 0:
            raise EmptyInput()
        bad = np.flatnonzero(~np.isfinite(values) | (values <= 0))
        if bad.size:
            raise NonPositiveWeight(int(bad[0]), float(values[int(bad[0])]))

        values = values / values.sum()
        if abs(values.sum() - 1.0) > NORMALIZATION_TOL:
            raise InvalidInput("Weights do not normalize to 1 within %g" % NORMALIZATION_TOL)
        values.setflags(write=False)
        self.weights = values
        self.N = int(values.size)

    def __len__(self):
        return self.N

    def __getitem__(self, index):
        return self.weights[index]

    def __repr__(self):
        return "WeightVector(N=%s, min=%.6g, max=%.6g)" % (self.N, self.min, self.max)

    @property
    def min(self):
        return float(self.weights.min())

    @property
    def max(self):
        return float(self.weights.max())


class IntegerWeightVector:
    """Positive integer stakes, as needed by weighted rejection sampling.

    Args:
        raw (array-like): Whole numbers >= 1. Floats are accepted when integral.

    Attributes:
        raw_weights (numpy.ndarray): Read-only int64 stakes.
        total (int): Exact sum W of the stakes.
        N (int): Number of participants.
    """

    def __init__(self, raw):
        raw = list(np.asarray(raw).ravel().tolist())
        if len(raw) == 0:
            raise EmptyInput()
        values = []
        for index, value in enumerate(raw):
            if isinstance(value, bool) or not isinstance(value, numbers.Real):
                raise NonPositiveWeight(index, value, integer=True)
            if isinstance(value, float) and not (np.isfinite(value) and value.is_integer()):
                raise NonPositiveWeight(index, value, integer=True)
            if value < 1:
                raise NonPositiveWeight(index, value, integer=True)
            values.append(int(value))

        self.raw_weights = np.array(values, dtype=np.int64)
        self.raw_weights.setflags(write=False)
        self.total = sum(values)
        self.N = len(values)

    def __len__(self):
        return self.N

    def __repr__(self):
        return "IntegerWeightVector(N=%s, total=%s)" % (self.N, self.total)

    def normalized(self):
        """The stakes divided by their total, as a WeightVector."""
        return WeightVector(self.raw_weights)


def validate_weights(raw):
    """Check and normalize raw weights.

    Args:
        raw (array-like): Raw positive weights.

    Returns:
        WeightVector: Entries divided by their sum, order preserved.

    Raises:
        EmptyInput: No entries.
        NonPositiveWeight: Some entry is <= 0 or not finite.
    """
    if isinstance(raw, WeightVector):
        return raw
    if isinstance(raw, IntegerWeightVector):
        return raw.normalized()
    return WeightVector(raw)


def validate_integer_weights(raw):
    if isinstance(raw, IntegerWeightVector):
        return raw
    return IntegerWeightVector(raw)


def check_committee_size(M, N):
    """Raise SizeExceedsPopulation unless 1 <= M <= N."""
    if int(M) != M or M < 1 or M > N:
        raise SizeExceedsPopulation(M, N)
    return int(M)


class SelectionOutcome:
    """A realized committee.

    Args:
        members (sequence of int): Distinct participant indices.
        raw_g (sequence of float): Raw weight g_n of each member, aligned with `members`.
        algorithm (str, optional): Name of the algorithm that produced it.
        rounds (int, optional): Rejection rounds used, 1 for single-shot algorithms.

    Attributes:
        members (frozenset): Committee member indices.
        raw_g (dict): Member index -> raw weight. Non-members are implicitly 0.
        voting_power (dict): Member index -> normalized voting power.
        algorithm (str): Producing algorithm.
        rounds (int): Rounds used.
    """

    def __init__(self, members, raw_g, algorithm=None, rounds=1):
        members = [int(m) for m in members]
        raw_g = [float(g) for g in raw_g]
        if len(members) != len(raw_g):
            raise ValueError("members and raw_g must have the same length")
        if len(set(members)) != len(members):
            raise ValueError("Committee has duplicate members: %s" % sorted(members))

        total = sum(raw_g)
        order = sorted(range(len(members)), key=lambda k: members[k])
        self.members = frozenset(members)
        self.raw_g = {members[k]: raw_g[k] for k in order}
        self.voting_power = {members[k]: raw_g[k] / total for k in order}
        self.algorithm = algorithm
        self.rounds = int(rounds)

    @property
    def M(self):
        return len(self.members)

    def __repr__(self):
        return "SelectionOutcome(%s, members=%s)" % (self.algorithm, sorted(self.members))

    def __eq__(self, other):
        if not isinstance(other, SelectionOutcome):
            return NotImplemented
        return (
            self.members == other.members
            and self.raw_g == other.raw_g
            and self.rounds == other.rounds
        )

    def power_of(self, index):
        return self.voting_power.get(int(index), 0.0)

    def power_array(self, N):
        """Voting power of every participant as a length-N array (zeros for non-members)."""
        powers = np.zeros(N)
        for index, power in self.voting_power.items():
            powers[index] = power
        return powers

    def to_dict(self, ids=None):
        """JSON-ready dict. Map keys are participant indices as strings.

        Args:
            ids (list, optional): Participant ids from the weight file, reported alongside indices.
        """
        data = {
            "algorithm": self.algorithm,
            "members": sorted(self.members),
            "raw_g": {str(k): v for k, v in self.raw_g.items()},
            "voting_power": {str(k): v for k, v in self.voting_power.items()},
            "rounds": self.rounds,
        }
        if ids is not None:
            data["member_ids"] = [_plain(ids[k]) for k in sorted(self.members)]
        return data


def _plain(value):
    # numpy scalars are not JSON serialisable
    return value.item() if hasattr(value, "item") else value


def draw_subset(stream, N, M):
    """Uniform M-subset of range(N) as an array in draw order.

    Partial Fisher-Yates over a virtual identity array; only touched slots are
    stored, so the cost is O(M) regardless of N. Consumes exactly M draws.
    """
    draws = stream.units(M)
    swapped = {}
    chosen = np.empty(M, dtype=np.int64)
    for i in range(M):
        j = i + min(int(draws[i] * (N - i)), N - i - 1)
        chosen[i] = swapped.get(j, j)
        swapped[j] = swapped.get(i, i)
    return chosen


def sample_uniform_subset(stream, N, M):
    """Draw M distinct indices out of N, every M-subset equally likely.

    Args:
        stream (PrngStream): Source of randomness, advanced by M draws.
        N (int): Population size.
        M (int): Subset size.

    Returns:
        frozenset: The chosen indices.

    Raises:
        SizeExceedsPopulation: M > N or M < 1.
    """
    check_committee_size(M, N)
    return frozenset(draw_subset(stream, N, M).tolist())


def random_order(stream, N):
    """Uniform permutation of range(N), consumes N draws."""
    return draw_subset(stream, N, N)


def load_weights(path, integer=False):
    """Read a weight file with header `id,weight`.

    Args:
        path (str): CSV file location.
        integer (bool, optional): Return an IntegerWeightVector. Defaults to False.

    Returns:
        tuple: (list of ids, WeightVector or IntegerWeightVector)
    """
    data = pd.read_csv(path, skipinitialspace=True)
    data.columns = [str(c).strip() for c in data.columns]
    if "id" not in data.columns or "weight" not in data.columns:
        raise InvalidInput(
            "Weight file %s must have the header 'id,weight', found %s"
            % (path, list(data.columns))
        )
    if len(data) == 0:
        raise EmptyInput("weight file %s" % path)

    ids = [_plain(i) for i in data["id"].tolist()]
    weights = data["weight"].tolist()
    if integer:
        return ids, IntegerWeightVector(weights)
    return ids, WeightVector(weights)
