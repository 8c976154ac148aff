"""
Deterministic random streams.

Every random draw the package makes comes from a PrngStream. A stream is the
Philox4x64-10 counter-based generator keyed by (seed, lane):

- key word 0 is the 64-bit seed, key word 1 is the lane id
- draw number k is word k % 4 of the cipher block at counter k // 4 + 1
- a unit draw is the top 53 bits of the raw word scaled by 2**-53, so it lies in [0, 1)

Because the mapping from (seed, lane, counter) to a value is a pure function,
streams can be positioned anywhere without replaying earlier draws, and
parallel workers get independent lanes instead of sharing one stream.
"""

import numpy as np

from .constants import UNIT_SHIFT, UNIT_SCALE, SEED_LIMIT, DRAWS_PER_BLOCK

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


def _check_word(value, name):
    if isinstance(value, bool) or int(value) != value:
        raise ValueError("%s must be an integer, got %r" % (name, value))
    value = int(value)
    if not 0 <= value < SEED_LIMIT:
        raise ValueError("%s must lie in [0, 2**64), got %s" % (name, value))
    return value


class PrngStream:
    """Single-owner stream of uniform draws.

    Args:
        seed (int): 64-bit unsigned seed.
        counter (int, optional): Index of the next draw. Defaults to 0.
        lane (int, optional): Sub-stream id used for parallel work. Defaults to 0.

    Attributes:
        seed (int): The seed.
        lane (int): The sub-stream id.
        counter (int): Number of draws taken so far, i.e. index of the next draw.
    """

    def __init__(self, seed, counter=0, lane=0):
        self.seed = _check_word(seed, "seed")
        self.lane = _check_word(lane, "lane")
        if int(counter) != counter or counter < 0:
            raise ValueError("counter must be a non-negative integer, got %r" % counter)
        self.counter = int(counter)

        self._bit_generator = np.random.Philox(
            counter=self.counter // DRAWS_PER_BLOCK,
            key=self.seed | (self.lane << 64),
        )
        skip = self.counter % DRAWS_PER_BLOCK
        if skip:
            self._bit_generator.random_raw(skip)

    def __repr__(self):
        return "PrngStream(seed=%s, counter=%s, lane=%s)" % (
            self.seed,
            self.counter,
            self.lane,
        )

    def raw(self):
        """Next raw 64-bit word as a Python int."""
        self.counter += 1
        return int(self._bit_generator.random_raw())

    def unit(self):
        """Next draw, uniform on [0, 1)."""
        return (self.raw() >> UNIT_SHIFT) * UNIT_SCALE

    def units(self, n):
        """The next n draws as a float64 array, same values as n calls to unit()."""
        n = int(n)
        if n <= 0:
            return np.zeros(0)
        raw = self._bit_generator.random_raw(n)
        self.counter += n
        return (raw >> np.uint64(UNIT_SHIFT)).astype(np.float64) * UNIT_SCALE

    def spawn(self, lane):
        """Independent stream for parallel work item `lane` (>= 0).

        The child lane is the (parent lane, lane) path hashed to 64 bits by
        numpy's SeedSequence, so spawned streams nest to any depth.
        """
        lane = _check_word(lane, "lane")
        child = np.random.SeedSequence(self.lane, spawn_key=(lane,)).generate_state(1, np.uint64)
        return PrngStream(self.seed, lane=int(child[0]))

    def copy(self):
        """A new stream positioned at the same draw."""
        return PrngStream(self.seed, counter=self.counter, lane=self.lane)


def prng_unit(stream):
    """Advance `stream` by one and return the draw, uniform on [0, 1)."""
    return stream.unit()
