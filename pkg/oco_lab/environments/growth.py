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
Beta-Bernoulli construction with a growing gradient sum, and its corrupted variant.

Each run draws P ~ Beta(k, k) once, then X_t ~ Bernoulli(P) i.i.d., and emits the linear loss with vector
h_t^L = (2 X_t - 1, -L). Because the second coordinate is -L every round, |h_1 + ... + h_t| >= tL on every prefix.
The P-marginal mean is (0, -L); a run is scored against its conditional mean (2P - 1, -L).
"""

from __future__ import annotations

import logging
import math

import numpy as np

from oco_lab.environments.environment import Environment
from oco_lab.environments.environment import Round
from oco_lab.errors import ConfigError
from oco_lab.errors import CorruptionBudgetExceeded
from oco_lab.errors import PreconditionError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.geometry.feasible_set import as_vector
from oco_lab.geometry.sets import AxisEllipsoid
from oco_lab.losses.loss_functions import Linear
from oco_lab.losses.loss_functions import LossFn

logger = logging.getLogger(__name__)


def growth_vector(bit: bool, level: float) -> Vector:
    """h^L for one Bernoulli outcome."""
    return np.array([2.0 * float(bit) - 1.0, -level])


class BetaBernoulliGrowth(Environment):
    """Linear losses h_t^L driven by a Beta(k, k)-mixed Bernoulli sequence."""

    kind = "beta_bernoulli_growth"

    def __init__(self, level: float = 0.1, k: float = 1.0):
        if not 0.0 < level < 1.0:
            raise ConfigError(f"growth level L must lie in (0, 1), got {level}")
        if not k > 0.0:
            raise ConfigError(f"Beta shape k must be positive, got {k}")
        self.level = float(level)
        self.k = float(k)
        self.success_probability = None
        super().__init__(2)

    def _start(self, rng: np.random.Generator, horizon: int):
        self.success_probability = float(rng.beta(self.k, self.k))
        logger.debug("%s drew P = %.6f", self.kind, self.success_probability)

    def _bit(self, rng: np.random.Generator) -> bool:
        return bool(rng.random() < self.success_probability)

    def _draw(self, rng: np.random.Generator, t: int, x_t: Vector) -> Round:
        loss = Linear(growth_vector(self._bit(rng), self.level))
        return Round(loss, loss)

    def mean_function(self) -> LossFn:
        # E[2X - 1] = E[2P - 1] = 0 for a symmetric Beta.
        return Linear(np.array([0.0, -self.level]))

    def run_mean_function(self) -> LossFn:
        """E[h^L | P] = (2P - 1, -L) for the P drawn by start_run."""
        if self.success_probability is None:
            raise PreconditionError(f"{self.kind} has no run mean before start_run")
        return Linear(np.array([2.0 * self.success_probability - 1.0, -self.level]))

    def gradient_bound(self, feasible_set: FeasibleSet) -> float:
        return math.sqrt(1.0 + self.level**2)

    def second_moment(self, u) -> float:
        u = as_vector(u, 2, name="u")
        return float(u[0] ** 2 + (self.level * u[1]) ** 2)

    def growth_rate(self) -> float:
        return self.level


class CorruptedGrowth(BetaBernoulliGrowth):
    """
    The growth construction on the ellipse W_λ with the first τ rounds corrupted.

    During rounds t <= τ the learner sees h_t^{L̂} instead of h_t^L, with the same X_t behind both, where
    λL̂ = sqrt(λL / C) and τ = ceil(C / (λL)). Requires C >= 1/(λL) and horizons T >= C / (λL)^2.
    """

    kind = "corrupted_growth"

    def __init__(self, level: float = 0.1, lam: float = 0.5, budget: float = 40.0, k: float = 1.0):
        super().__init__(level, k)
        if not 0.0 < lam <= 1.0:
            raise ConfigError(f"ellipse lambda must lie in (0, 1], got {lam}")
        if not budget > 0.0:
            raise ConfigError(f"corruption budget C must be positive, got {budget}")
        self.lam = float(lam)
        self.budget = float(budget)
        minimum = 1.0 / (self.lam * self.level)
        if self.budget < minimum:
            raise ConfigError(
                f"corruption budget violates C >= 1/(lambda*L): C = {self.budget} < {minimum:.6g} "
                f"(lambda = {self.lam}, L = {self.level})"
            )
        self.corrupted_level = math.sqrt(self.lam * self.level / self.budget) / self.lam
        # The ratio is often an integer up to rounding; do not let 800.0000000001 become 801.
        self.corrupted_rounds = math.ceil(self.budget / (self.lam * self.level) - 1e-9)
        self.per_round_corruption = self.lam * abs(self.level - self.corrupted_level)

    @property
    def minimum_horizon(self) -> float:
        """C / (λL)^2."""
        return self.budget / (self.lam * self.level) ** 2

    def projected_corruption(self) -> float:
        """Total corruption the construction spends over a full run: τ λ |L - L̂|."""
        return self.corrupted_rounds * self.per_round_corruption

    def check_feasible_set(self, feasible_set: FeasibleSet):
        super().check_feasible_set(feasible_set)
        if not isinstance(feasible_set, AxisEllipsoid) or not np.allclose(
            feasible_set.semi_axes, (1.0, self.lam), rtol=0.0, atol=1e-12
        ):
            raise ConfigError(f"{self.kind} requires the ellipse W_lambda with semi-axes (1, {self.lam})")

    def _start(self, rng: np.random.Generator, horizon: int):
        if horizon < self.minimum_horizon:
            raise ConfigError(
                f"horizon violates T >= C/(lambda*L)^2: T = {horizon} < {self.minimum_horizon:.6g}"
            )
        super()._start(rng, horizon)

    def _draw(self, rng: np.random.Generator, t: int, x_t: Vector) -> Round:
        bit = self._bit(rng)
        clean = Linear(growth_vector(bit, self.level))
        if t > self.corrupted_rounds:
            return Round(clean, clean)
        self.corruption_used += self.per_round_corruption
        if self.corruption_used > self.budget * (1.0 + 1e-12):
            raise CorruptionBudgetExceeded(f"corruption {self.corruption_used:.12g} exceeds budget {self.budget}")
        return Round(Linear(growth_vector(bit, self.corrupted_level)), clean)

    def corruption_budget(self) -> float:
        return self.budget
