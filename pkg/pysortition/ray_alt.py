"""In-process stand-in for the parts of ray the package uses, for when ray is not installed."""

import warnings

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

_initialized = False


class remote:
    def __init__(self, f):
        self.f = f

    def __call__(self, *args, **kwargs):
        return self.f(*args, **kwargs)

    def remote(self, *args, **kwargs):
        # Runs immediately, the "object ref" is the result itself
        return self.f(*args, **kwargs)


def init(*args, **kwargs):
    global _initialized
    warnings.warn(
        "Ray was not available so parallel running will not work, work runs serially"
    )
    _initialized = True


def is_initialized():
    return _initialized


def get(refs):
    return refs
