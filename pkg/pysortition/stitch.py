"""
Stitch: systematic sampling over weight intervals.

Participants are laid end to end on [0, 1), each occupying a half-open
interval as long as its weight. One uniform start x places M points
{x + i/M}, evenly spaced around the unit circle; the committee is every
participant whose interval holds a point. With all weights below 1/M no
interval can hold two points, so the committee has exactly M members, each
with voting power 1/M.
"""

import numpy as np

from .core import validate_weights, check_committee_size, random_order, SelectionOutcome
from .errors import WeightTooLarge, SortitionError

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


class StitchConfig:
    """Settings for a stitch selection.

    Args:
        M (int): Committee size, at least 1.
        permute_first (bool, optional): Shuffle the interval layout with the stream before
            drawing the start point. Defaults to False.
    """

    def __init__(self, M, permute_first=False):
        if int(M) != M or M < 1:
            raise ValueError("Committee size must be a positive integer, got %r" % M)
        self.M = int(M)
        self.permute_first = bool(permute_first)


def check_stitch_feasible(w, M):
    """Raise WeightTooLarge for the first participant with w_n >= 1/M."""
    too_large = np.flatnonzero(w.weights * M >= 1.0)
    if too_large.size:
        index = int(too_large[0])
        raise WeightTooLarge(index, float(w.weights[index]), M)


def _boundaries(w, order):
    # Right edges of the laid-out intervals; the last one is exactly 1.
    right = np.cumsum(w.weights[order])
    right[-1] = 1.0
    return right


def _points(x, M):
    points = np.mod(x + np.arange(M) / M, 1.0)
    points[points >= 1.0] = 0.0
    return points


def _members_at(right, order, x, M):
    positions = np.searchsorted(right, _points(x, M), side="right")
    positions = np.minimum(positions, len(order) - 1)
    members = order[positions]
    if np.unique(members).size != M:
        raise SortitionError(
            "Stitch hit participant %s twice at x=%r, a weight is within rounding of 1/M"
            % (sorted(members.tolist()), x)
        )
    return members


def stitch_committee_at(w, M, x, order=None):
    """Committee picked by the start point x.

    Args:
        w (WeightVector): Weights.
        M (int): Committee size.
        x (float): Start point in [0, 1).
        order (numpy.ndarray, optional): Layout order of participants, identity by default.

    Returns:
        frozenset: Member indices.
    """
    w = validate_weights(w)
    M = check_committee_size(M, w.N)
    check_stitch_feasible(w, M)
    if order is None:
        order = np.arange(w.N)
    return frozenset(_members_at(_boundaries(w, order), order, x, M).tolist())


def stitch_select(w, cfg, stream):
    """Select a committee with the stitch.

    Args:
        w (WeightVector): Weights, every entry below 1/M.
        cfg (StitchConfig): Committee size and layout option.
        stream (PrngStream): Randomness. The optional permutation takes N draws, then x takes one.

    Returns:
        SelectionOutcome: M members, each with voting power 1/M.

    Raises:
        WeightTooLarge: Some weight is >= 1/M.
    """
    w = validate_weights(w)
    M = check_committee_size(cfg.M, w.N)
    check_stitch_feasible(w, M)

    if cfg.permute_first:
        order = random_order(stream, w.N)
    else:
        order = np.arange(w.N)
    x = stream.unit()

    members = _members_at(_boundaries(w, order), order, x, M)
    return SelectionOutcome(members, np.ones(M), algorithm="stitch")


def stitch_segments(w, M):
    """Split the start-point range into pieces with a constant committee.

    Only x mod 1/M matters, so the pieces tile [0, 1/M). Breakpoints are the
    interval boundaries reduced mod 1/M.

    Yields:
        tuple: (segment start, segment length, committee as a numpy array)
    """
    w = validate_weights(w)
    M = check_committee_size(M, w.N)
    check_stitch_feasible(w, M)

    order = np.arange(w.N)
    right = _boundaries(w, order)
    step = 1.0 / M
    reduced = np.mod(right, step)
    breaks = np.unique(np.concatenate(([0.0], reduced[reduced < step])))
    ends = np.append(breaks[1:], step)

    for start, end in zip(breaks, ends):
        if end <= start:
            continue
        members = _members_at(right, order, 0.5 * (start + end), M)
        yield float(start), float(end - start), members


def stitch_exact_expected_power(w, M):
    """Exact expected voting power under the stitch, by integrating over x.

    Each segment of [0, 1/M) is hit with probability length*M and gives its M
    members power 1/M, so a member collects `length` from it.

    Args:
        w (WeightVector): Weights, every entry below 1/M.
        M (int): Committee size.

    Returns:
        numpy.ndarray: Expected power per participant, equal to w.
    """
    w = validate_weights(w)
    expected = np.zeros(w.N)
    for start, length, members in stitch_segments(w, M):
        expected[members] += length
    return expected
