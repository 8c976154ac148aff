"""
The Sortition object ties an algorithm to its inputs.

Building one validates the inputs and precomputes whatever the algorithm
derives from the weights (acceptance weights, subset counts, groups), so
repeated selections only pay for the random draws.
"""

import json

from .constants import DEFAULT_MAX_ROUNDS
from .core import validate_weights, validate_integer_weights, check_committee_size
from .metrics import check_algorithm, lambda_for
from .stitch import StitchConfig, check_stitch_feasible, stitch_select
from .crs import crs_weights, crs_select
from .wrs import WrsConfig, wrs_weights, wrs_select
from .rec import rec_partition, rec_select

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


class Sortition:
    """Committee selection with a fixed algorithm, weights and committee size.

    Args:
        algorithm (str): "stitch", "crs", "wrs" or "rec".
        weights (array-like, WeightVector or IntegerWeightVector): Participant weights. wrs
            needs whole-number stakes.
        M (int): Committee size.
        alpha (float, optional): wrs stake threshold as a fraction of the total. Required for wrs.
        permute_first (bool, optional): stitch only, shuffle the layout each selection. Defaults to False.
        max_rounds (int, optional): crs/wrs rejection round budget. Defaults to 100000.
        debug (bool, optional): Print wrs table build information to stderr. Defaults to False.

    Attributes:
        algorithm (str): Algorithm name.
        weights (WeightVector): Normalized weights.
        stakes (IntegerWeightVector): Integer stakes, wrs only (None otherwise).
        M (int): Committee size.
        config: StitchConfig or WrsConfig, None for crs and rec.
        sampling: CrsWeights, WrsWeights or RecPartition, None for stitch.

    Raises:
        FeasibilityError: The algorithm cannot run on these inputs.
    """

    def __init__(
        self,
        algorithm,
        weights,
        M,
        alpha=None,
        permute_first=False,
        max_rounds=DEFAULT_MAX_ROUNDS,
        debug=False,
    ):
        self.algorithm = check_algorithm(algorithm)
        self.alpha = alpha
        self.max_rounds = int(max_rounds)
        self.config = None
        self.sampling = None
        self.stakes = None

        if self.algorithm == "wrs":
            if alpha is None:
                raise ValueError("wrs needs a stake threshold alpha")
            self.stakes = validate_integer_weights(weights)
            self.weights = self.stakes.normalized()
            self.M = check_committee_size(M, self.stakes.N)
            self.config = WrsConfig.for_weights(self.stakes, self.M, alpha)
            self.sampling = wrs_weights(self.stakes, self.config, debug=debug)
            return

        self.weights = validate_weights(weights)
        self.M = check_committee_size(M, self.weights.N)
        if self.algorithm == "stitch":
            self.config = StitchConfig(self.M, permute_first)
            check_stitch_feasible(self.weights, self.M)
        elif self.algorithm == "crs":
            self.sampling = crs_weights(self.weights, self.M)
        else:
            self.sampling = rec_partition(self.weights, self.M)

    @property
    def N(self):
        return self.weights.N

    def __repr__(self):
        return "Sortition(%s, N=%s, M=%s)" % (self.algorithm, self.N, self.M)

    def select(self, stream):
        """Run one selection.

        Args:
            stream (PrngStream): Randomness, advanced by the draws the algorithm takes.

        Returns:
            SelectionOutcome: The committee.
        """
        if self.algorithm == "stitch":
            return stitch_select(self.weights, self.config, stream)
        if self.algorithm == "crs":
            return crs_select(
                self.weights, self.M, stream, self.max_rounds, weights=self.sampling
            )
        if self.algorithm == "wrs":
            return wrs_select(
                self.stakes, self.config, self.sampling, stream, self.max_rounds
            )
        return rec_select(self.weights, self.M, stream, partition=self.sampling)

    def report(self):
        """DecentralizationReport for this configuration."""
        if self.algorithm == "wrs":
            return lambda_for("wrs", self.stakes, self.M, self.alpha, self.sampling)
        return lambda_for(self.algorithm, self.weights, self.M, sampling=self.sampling)


def to_json(data, path=None):
    """Serialise a dict with sorted keys. Writes to `path` if given, returns the text."""
    text = json.dumps(data, sort_keys=True, indent=2)
    if path is not None:
        with open(path, "w+") as write_file:
            write_file.write(text + "\n")
    return text


def from_json(path):
    """Load a JSON document written by to_json."""
    with open(path, "r") as read_file:
        return json.load(read_file)
