"""Numerical constants shared across the package."""

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

"""Tolerances"""
NORMALIZATION_TOL = 1e-12  # Absolute tolerance on sums of weights and powers
FEASIBILITY_RTOL = 1e-12  # Relative slack when comparing against closed-form bounds
POWER_TOL = 1e-12  # Slack on the honest-majority 1/2 comparison
SIGMA_THRESHOLD = 5.0  # Per-coordinate deviation, in standard errors, accepted as fair

"""Random stream"""
UNIT_SHIFT = 11  # 64-bit raw draw -> 53-bit mantissa
UNIT_SCALE = 2.0**-53
SEED_LIMIT = 2**64
DRAWS_PER_BLOCK = 4  # Philox4x64 emits four words per counter value

"""Selection"""
DEFAULT_MAX_ROUNDS = 100000
SLOW_ACCEPTANCE = 1e-4  # Warn when a rejection round is expected to accept less often than this

"""Exact subset counting"""
# Largest primes below 2**31. Adding a participant at most doubles a table
# entry, so reduced residues stay below 2**61 for LAZY_REDUCTION_STEPS
# participants between reductions.
COUNT_MODULI = (
    2147483647,
    2147483629,
    2147483587,
    2147483579,
    2147483563,
    2147483549,
    2147483543,
    2147483497,
    2147483489,
    2147483477,
    2147483423,
    2147483399,
)
LAZY_REDUCTION_STEPS = 30

"""Enumeration caps"""
MAX_ENUMERATION_N = 15
MAX_STITCH_ENUMERATION_N = 64
MAX_PRODUCT_ENUMERATION = 10**6

"""Experiments"""
DEFAULT_N = 1000
DEFAULT_M = 20
DEFAULT_S_GRID = tuple(round(0.1 * k, 1) for k in range(21))
DEFAULT_ALPHA_GRID = tuple(round(0.05 * k, 2) for k in range(1, 20))
DEFAULT_LAMBDA_ALPHA_S = (0.5, 1.0, 1.5)
DEFAULT_MAX_WRS_CUTOFF = 100000
TRIALS_PER_CHUNK = 10000
CSV_FLOAT_FORMAT = "%.12g"
NUM_CPUS_ENV = "PYSORTITION_NUM_CPUS"
