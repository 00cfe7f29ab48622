# Copyright © 2025 Cognizant Technology Solutions Corp, www.cognizant.com.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
# END COPYRIGHT
"""
Exception hierarchy shared by every oco_lab sub-package.

The command line maps these onto exit codes: ConfigError -> 2, InvariantViolation -> 3,
PropertyViolation -> 1.
"""


class OcoLabError(Exception):
    """Base class for all errors raised by oco_lab."""


class ConfigError(OcoLabError, ValueError):
    """Invalid parameters, schema failures, or violated preconditions of a construction."""


class PreconditionError(OcoLabError, ValueError):
    """An operation was called with inputs outside its domain."""


class InvariantViolation(OcoLabError, RuntimeError):
    """A runtime invariant was broken. Always a bug or a numerical breakdown."""


class CorruptionBudgetExceeded(InvariantViolation):
    """Cumulative corruption went past the configured budget C."""


class InfeasiblePrediction(InvariantViolation):
    """A learner produced a point outside the feasible set."""


class ProjectionError(InvariantViolation):
    """A projection root-finder did not converge or its KKT residual is too large."""


class PropertyViolation(OcoLabError):
    """A property suite found a counterexample."""

    def __init__(self, message: str, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample
