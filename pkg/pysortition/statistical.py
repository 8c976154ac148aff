"""
Monte Carlo checks run over many seeded selections.

Work is cut into chunks of TRIALS_PER_CHUNK selections, chunk c drawing from
stream.spawn(c). The chunk layout does not depend on how many workers run
them, so serial and parallel runs give identical results. Chunks run on ray
when it is installed, otherwise serially through ray_alt.
"""

import os, sys, warnings
import numpy as np

from .constants import (
    TRIALS_PER_CHUNK,
    NUM_CPUS_ENV,
    SIGMA_THRESHOLD,
    POWER_TOL,
    NORMALIZATION_TOL,
)
from .errors import (
    PreconditionViolated,
    HonestMajorityViolated,
    DecentralizationBoundViolated,
)

try:
    import ray

    RAY_AVAILABLE = True
except ImportError:
    RAY_AVAILABLE = False
    from . import ray_alt as ray

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

MIN_FAIRNESS_TRIALS = 1000
PRECONDITION_RTOL = 1e-9
RATIO_RTOL = 1e-9


def default_num_cpus():
    """Worker count from PYSORTITION_NUM_CPUS, 1 (serial) when unset."""
    value = os.environ.get(NUM_CPUS_ENV, "").strip()
    if not value:
        return 1
    try:
        return max(1, int(value))
    except ValueError:
        warnings.warn("%s=%r is not an integer, running serially" % (NUM_CPUS_ENV, value))
        return 1


def run_tasks(func, arg_list, num_cpus=None, debug=False):
    """Run func(*args) for every args in arg_list, results in input order.

    Args:
        func (callable): Module level function, so ray can ship it to workers.
        arg_list (list of tuple): Arguments for each call.
        num_cpus (int, optional): Workers. Defaults to default_num_cpus().
        debug (bool, optional): Print dispatch information to stderr. Defaults to False.

    Returns:
        list: func's results.
    """
    if num_cpus is None:
        num_cpus = default_num_cpus()
    if debug:
        print(
            "Dispatching %s tasks of %s on %s cpu(s)%s"
            % (
                len(arg_list),
                func.__name__,
                num_cpus,
                "" if RAY_AVAILABLE else " (ray not installed)",
            ),
            file=sys.stderr,
        )
    if num_cpus <= 1 or len(arg_list) <= 1:
        return [func(*args) for args in arg_list]

    if not ray.is_initialized():
        try:
            ray.init(num_cpus=num_cpus)
        except Exception as error:
            warnings.warn("Ray failed to start (%s), work runs serially" % error)
            return [func(*args) for args in arg_list]
    remote_func = ray.remote(func)
    return ray.get([remote_func.remote(*args) for args in arg_list])


def chunk_plan(trials, stream):
    """(chunk stream, chunk size) pairs covering `trials` selections."""
    trials = int(trials)
    if trials < 1:
        raise ValueError("At least one selection is needed, got %s" % trials)
    plan = []
    for c, start in enumerate(range(0, trials, TRIALS_PER_CHUNK)):
        plan.append((stream.spawn(c), min(TRIALS_PER_CHUNK, trials - start)))
    return plan


def _power_sums(sortition, stream, trials):
    N = sortition.N
    sums = np.zeros(N)
    squares = np.zeros(N)
    for _ in range(trials):
        outcome = sortition.select(stream)
        members = np.fromiter(outcome.voting_power.keys(), dtype=np.int64)
        powers = np.fromiter(outcome.voting_power.values(), dtype=np.float64)
        sums[members] += powers
        squares[members] += powers * powers
    return sums, squares


class FairnessTestResult:
    """Empirical expected voting power against the weights.

    Args:
        weights (numpy.ndarray): Normalized weights w.
        sums (numpy.ndarray): Sum of each participant's voting power over the trials.
        squares (numpy.ndarray): Sum of squared voting powers.
        trials (int): Number of selections.

    Attributes:
        means (numpy.ndarray): Mean voting power per participant.
        std_errors (numpy.ndarray): Standard error of each mean.
        deviations (numpy.ndarray): means - w.
        sigma (numpy.ndarray): |deviations| in standard errors.
        max_sigma_deviation (float): Largest entry of sigma.
    """

    def __init__(self, weights, sums, squares, trials):
        self.trials = int(trials)
        self.weights = np.asarray(weights, dtype=np.float64)
        self.means = sums / trials
        variance = np.maximum(squares / trials - self.means**2, 0.0) * trials / (trials - 1)
        self.std_errors = np.sqrt(variance / trials)
        self.deviations = self.means - self.weights

        absolute = np.abs(self.deviations)
        with np.errstate(divide="ignore", invalid="ignore"):
            sigma = absolute / self.std_errors
        # Zero spread is only consistent with an exact match
        sigma[self.std_errors == 0] = np.where(
            absolute[self.std_errors == 0] <= NORMALIZATION_TOL, 0.0, np.inf
        )
        self.sigma = sigma
        self.max_sigma_deviation = float(sigma.max())

    def __repr__(self):
        return "FairnessTestResult(trials=%s, max_sigma_deviation=%.3f)" % (
            self.trials,
            self.max_sigma_deviation,
        )

    @property
    def fair(self):
        return self.max_sigma_deviation <= SIGMA_THRESHOLD

    def to_dict(self):
        return {
            "trials": self.trials,
            "max_sigma_deviation": self.max_sigma_deviation,
            "fair": self.fair,
            "threshold_sigma": SIGMA_THRESHOLD,
            "per_participant": [
                {
                    "index": i,
                    "weight": float(self.weights[i]),
                    "mean_power": float(self.means[i]),
                    "std_error": float(self.std_errors[i]),
                    "deviation": float(self.deviations[i]),
                }
                for i in range(len(self.weights))
            ],
        }


def empirical_fairness(sortition, trials, stream, num_cpus=None, debug=False):
    """Run `trials` selections and compare mean voting power with the weights.

    Args:
        sortition (Sortition): Algorithm and inputs.
        trials (int): Number of selections, at least 1000.
        stream (PrngStream): Parent stream; chunks use its spawned lanes, it is not advanced.
        num_cpus (int, optional): Workers. Defaults to default_num_cpus().
        debug (bool, optional): Print dispatch information. Defaults to False.

    Returns:
        FairnessTestResult: Means, standard errors and the largest deviation in sigma.
    """
    if trials < MIN_FAIRNESS_TRIALS:
        raise ValueError(
            "Fairness testing needs at least %s trials, got %s" % (MIN_FAIRNESS_TRIALS, trials)
        )
    arg_list = [(sortition, chunk, size) for chunk, size in chunk_plan(trials, stream)]
    results = run_tasks(_power_sums, arg_list, num_cpus, debug)
    sums = sum(r[0] for r in results)
    squares = sum(r[1] for r in results)
    return FairnessTestResult(sortition.weights.weights, sums, squares, trials)


def _adversary_powers(sortition, adversary, stream, samples):
    worst = 0.0
    worst_committee = frozenset()
    for _ in range(samples):
        outcome = sortition.select(stream)
        power = sum(outcome.voting_power.get(a, 0.0) for a in adversary)
        if power > worst:
            worst = power
            worst_committee = outcome.members
    return worst, worst_committee


class HonestMajorityVerdict:
    """Outcome of honest_majority_check.

    Attributes:
        samples (int): Committees drawn.
        adversary (tuple): Adversary indices.
        adversary_weight (float): Their total weight.
        lam (float): lambda the precondition was checked against.
        max_power (float): Largest adversarial voting power seen.
        worst_committee (frozenset): Committee attaining max_power.
    """

    def __init__(self, samples, adversary, adversary_weight, lam, max_power, worst_committee):
        self.samples = samples
        self.adversary = adversary
        self.adversary_weight = adversary_weight
        self.lam = lam
        self.max_power = max_power
        self.worst_committee = worst_committee

    def __repr__(self):
        return "HonestMajorityVerdict(samples=%s, max_power=%.6g)" % (
            self.samples,
            self.max_power,
        )

    def to_dict(self):
        return {
            "samples": self.samples,
            "adversary": list(self.adversary),
            "adversary_weight": self.adversary_weight,
            "lambda": self.lam,
            "max_power": self.max_power,
            "worst_committee": sorted(self.worst_committee),
        }


def honest_majority_check(sortition, adversary, samples, stream, num_cpus=None, lam=None):
    """Verify that an adversary holding at most lambda/2 never controls a committee.

    Args:
        sortition (Sortition): Algorithm and inputs.
        adversary (iterable of int): Adversary participant indices.
        samples (int): Committees to draw.
        stream (PrngStream): Parent stream, not advanced.
        num_cpus (int, optional): Workers. Defaults to default_num_cpus().
        lam (float, optional): lambda to check against. Defaults to sortition.report().lam.

    Returns:
        HonestMajorityVerdict: The largest adversarial power observed.

    Raises:
        PreconditionViolated: The adversary holds more than lambda/2 of the weight.
        HonestMajorityViolated: Some committee gave the adversary more than half the power.
    """
    adversary = tuple(sorted(set(int(a) for a in adversary)))
    for a in adversary:
        if not 0 <= a < sortition.N:
            raise IndexError("Adversary index %s is outside 0..%s" % (a, sortition.N - 1))
    if lam is None:
        lam = sortition.report().lam

    weight = float(sortition.weights.weights[list(adversary)].sum()) if adversary else 0.0
    if weight > lam / 2 * (1 + PRECONDITION_RTOL):
        raise PreconditionViolated(
            "Adversary weight %.15g exceeds lambda/2 = %.15g, the guarantee does not apply"
            % (weight, lam / 2)
        )

    if not adversary:
        return HonestMajorityVerdict(samples, adversary, 0.0, lam, 0.0, frozenset())

    arg_list = [(sortition, adversary, chunk, size) for chunk, size in chunk_plan(samples, stream)]
    results = run_tasks(_adversary_powers, arg_list, num_cpus)
    max_power, worst_committee = max(results, key=lambda r: r[0])
    if max_power > 0.5 + POWER_TOL:
        raise HonestMajorityViolated(max_power, worst_committee)
    return HonestMajorityVerdict(samples, adversary, weight, lam, max_power, worst_committee)


def _worst_ratio(sortition, stream, samples):
    weights = sortition.weights.weights
    worst = 0.0
    worst_committee = frozenset()
    for _ in range(samples):
        outcome = sortition.select(stream)
        ratio = max(power / weights[n] for n, power in outcome.voting_power.items())
        if ratio > worst:
            worst = ratio
            worst_committee = outcome.members
    return worst, worst_committee


class LambdaValidation:
    """Largest realized voting power / weight against the bound 1/lambda.

    Attributes:
        trials (int): Selections drawn.
        lam (float): lambda validated.
        max_ratio (float): Largest realized ratio.
        attained (bool): Whether max_ratio reached 1/lambda (within 1e-9 relative).
    """

    def __init__(self, trials, lam, max_ratio, worst_committee):
        self.trials = trials
        self.lam = lam
        self.max_ratio = max_ratio
        self.worst_committee = worst_committee
        self.attained = max_ratio >= (1.0 / lam) * (1 - RATIO_RTOL)

    def __repr__(self):
        return "LambdaValidation(max_ratio=%.6g, bound=%.6g, attained=%s)" % (
            self.max_ratio,
            1.0 / self.lam,
            self.attained,
        )


def validate_lambda(sortition, trials, stream, lam=None, num_cpus=None):
    """Check that no sampled committee beats the decentralization bound.

    Args:
        sortition (Sortition): Algorithm and inputs.
        trials (int): Selections to draw.
        stream (PrngStream): Parent stream, not advanced.
        lam (float, optional): Defaults to sortition.report().lam.
        num_cpus (int, optional): Workers. Defaults to default_num_cpus().

    Returns:
        LambdaValidation: The largest realized ratio.

    Raises:
        DecentralizationBoundViolated: A member's power exceeded 1/lambda times its weight.
    """
    if lam is None:
        lam = sortition.report().lam
    arg_list = [(sortition, chunk, size) for chunk, size in chunk_plan(trials, stream)]
    results = run_tasks(_worst_ratio, arg_list, num_cpus)
    max_ratio, worst_committee = max(results, key=lambda r: r[0])
    if max_ratio > (1.0 / lam) * (1 + RATIO_RTOL):
        raise DecentralizationBoundViolated(max_ratio, lam, worst_committee)
    return LambdaValidation(int(trials), lam, max_ratio, worst_committee)
