"""
Exceptions raised by the selection algorithms, analysers and oracles.

FeasibilityError and its subclasses mean "this algorithm cannot run on these
weights with this committee size"; everything else is either bad input or a
runtime limit being hit.
"""

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


class SortitionError(Exception):
    """Base class for every error raised by pysortition"""


class InvalidInput(SortitionError, ValueError):
    """The inputs themselves are malformed"""


class EmptyInput(InvalidInput):
    def __init__(self, what="weight list"):
        self.what = what
        super().__init__("Empty %s, at least one participant is required" % what)


class NonPositiveWeight(InvalidInput):
    """A weight is not a strictly positive finite number (or not an integer >= 1 in integer mode).

    Args:
        index (int): Position of the first offending entry.
        value: The offending value.
    """

    def __init__(self, index, value, integer=False):
        self.index = index
        self.value = value
        if integer:
            msg = "Weight at index %s is %r, integer weights must be whole numbers >= 1"
        else:
            msg = "Weight at index %s is %r, weights must be positive and finite"
        super().__init__(msg % (index, value))


class SizeExceedsPopulation(InvalidInput):
    def __init__(self, M, N):
        self.M = M
        self.N = N
        if M < 1:
            msg = "Committee size M=%s must be at least 1" % M
        else:
            msg = "Committee size M=%s exceeds the population N=%s" % (M, N)
        super().__init__(msg)


class FeasibilityError(SortitionError):
    """The algorithm's precondition on (weights, M, parameters) does not hold"""


class WeightTooLarge(FeasibilityError):
    """Stitch needs every weight strictly below 1/M.

    Args:
        index (int): Participant whose weight breaks the bound.
        weight (float): Its normalized weight.
        M (int): Committee size.
    """

    def __init__(self, index, weight, M):
        self.index = index
        self.weight = weight
        self.M = M
        super().__init__(
            "Participant %s has weight %.12g >= 1/M = %.12g, stitch would select it twice"
            % (index, weight, 1.0 / M)
        )


class InfeasibleWeights(FeasibilityError):
    """Cumulative rejection sampling cannot calibrate non-negative acceptance weights.

    Args:
        diagnostic (str): Which index breaks which bound.
        index (int, optional): The offending participant, None for size violations.
    """

    def __init__(self, diagnostic, index=None):
        self.diagnostic = diagnostic
        self.index = index
        super().__init__(diagnostic)


class InfeasibleAlpha(FeasibilityError):
    """No committee containing `index` reaches the weight threshold, so C_index = 0"""

    def __init__(self, index, cutoff, best=None):
        self.index = index
        self.cutoff = cutoff
        self.best = best
        if index is None:
            msg = "No committee reaches the weight cutoff V=%s (largest possible sum %s)" % (
                cutoff,
                best,
            )
        elif best is None:
            msg = "No committee containing participant %s reaches the weight cutoff V=%s" % (
                index,
                cutoff,
            )
        else:
            msg = (
                "No committee containing participant %s reaches the weight cutoff V=%s "
                "(best such committee sums to %s)" % (index, cutoff, best)
            )
        super().__init__(msg)


class RejectionBudgetExhausted(SortitionError):
    def __init__(self, rounds):
        self.rounds = rounds
        super().__init__(
            "All %s rejection rounds rejected, the configuration accepts too rarely"
            % rounds
        )


class TooLargeForEnumeration(SortitionError):
    def __init__(self, size, cap, what="N"):
        self.size = size
        self.cap = cap
        super().__init__(
            "Exhaustive enumeration refused: %s=%s exceeds the cap of %s" % (what, size, cap)
        )


class PreconditionViolated(SortitionError):
    """The honest-majority check was asked to verify a case it makes no claim about"""


class HonestMajorityViolated(SortitionError):
    """A sampled committee handed the adversary more than half of the voting power"""

    def __init__(self, power, committee):
        self.power = power
        self.committee = committee
        super().__init__(
            "Adversary obtained voting power %.15g > 1/2 in committee %s"
            % (power, sorted(committee))
        )


class CountCapacityExceeded(SortitionError):
    def __init__(self, bits, capacity):
        self.bits = bits
        self.capacity = capacity
        super().__init__(
            "Subset counts need %s bits but the residue system holds %s bits"
            % (bits, capacity)
        )


class DecentralizationBoundViolated(SortitionError):
    """A sampled committee gave a member more than 1/lambda times its weight"""

    def __init__(self, ratio, lam, committee):
        self.ratio = ratio
        self.lam = lam
        self.committee = committee
        super().__init__(
            "Power ratio %.15g exceeds 1/lambda = %.15g in committee %s"
            % (ratio, 1.0 / lam, sorted(committee))
        )
