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
I.i.d. environments: a fixed mean plus symmetric bounded noise, for linear, quadratic and squared-linear losses.
"""

from __future__ import annotations

import numpy as np

from oco_lab.environments.environment import Environment
from oco_lab.environments.environment import NoiseSpec
from oco_lab.environments.environment import Round
from oco_lab.errors import ConfigError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.geometry.feasible_set import as_vector
from oco_lab.losses.loss_functions import Linear
from oco_lab.losses.loss_functions import LossFn
from oco_lab.losses.loss_functions import Quadratic
from oco_lab.losses.loss_functions import QuadraticForm
from oco_lab.losses.loss_functions import SquaredLinear


def _config_vector(value, name: str) -> Vector:
    try:
        return as_vector(value, name=name)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


class StochasticLinear(Environment):
    """g_t = g° + noise, i.i.d."""

    kind = "stochastic_linear"

    def __init__(self, mean, noise: NoiseSpec = NoiseSpec()):
        self.mean = _config_vector(mean, "mean")
        self.noise = noise
        super().__init__(self.mean.shape[0])
        noise.mask(self.dim)

    def _draw(self, rng: np.random.Generator, t: int, x_t: Vector) -> Round:
        loss = Linear(self.mean + self.noise.sample(rng, self.dim))
        return Round(loss, loss)

    def mean_function(self) -> LossFn:
        return Linear(self.mean)

    def gradient_bound(self, feasible_set: FeasibleSet) -> float:
        return float(np.linalg.norm(np.abs(self.mean) + self.noise.magnitude_bound(self.dim)))

    def second_moment(self, u) -> float:
        u = as_vector(u, self.dim, name="u")
        return float(self.mean @ u) ** 2 + float(self.noise.variances(self.dim) @ u**2)


class StochasticQuadratic(Environment):
    """f_t(x) = (α/2)|x - θ_t|^2 with θ_t = θ° + noise."""

    kind = "stochastic_quadratic"

    def __init__(self, theta_mean, alpha: float = 1.0, noise: NoiseSpec = NoiseSpec()):
        self.theta_mean = _config_vector(theta_mean, "theta_mean")
        if not alpha > 0.0:
            raise ConfigError(f"alpha must be positive, got {alpha}")
        self.alpha = float(alpha)
        self.noise = noise
        super().__init__(self.theta_mean.shape[0])
        noise.mask(self.dim)

    def _draw(self, rng: np.random.Generator, t: int, x_t: Vector) -> Round:
        loss = Quadratic(self.theta_mean + self.noise.sample(rng, self.dim), self.alpha)
        return Round(loss, loss)

    def mean_function(self) -> LossFn:
        # The noise only shifts the constant term, which does not move the minimizer or the regret.
        return Quadratic(self.theta_mean, self.alpha)

    def gradient_bound(self, feasible_set: FeasibleSet) -> float:
        reach = float(np.linalg.norm(np.abs(self.theta_mean) + self.noise.magnitude_bound(self.dim)))
        return self.alpha * (reach + feasible_set.max_norm())


class StochasticSquaredLinear(Environment):
    """f_t(x) = (<a_t, x> - b)^2 with a_t = a° + noise."""

    kind = "stochastic_squared_linear"

    def __init__(self, a_mean, b: float = 0.0, noise: NoiseSpec = NoiseSpec()):
        self.a_mean = _config_vector(a_mean, "a_mean")
        self.b = float(b)
        self.noise = noise
        super().__init__(self.a_mean.shape[0])
        noise.mask(self.dim)

    def _draw(self, rng: np.random.Generator, t: int, x_t: Vector) -> Round:
        loss = SquaredLinear(self.a_mean + self.noise.sample(rng, self.dim), self.b)
        return Round(loss, loss)

    def mean_function(self) -> LossFn:
        quad = np.outer(self.a_mean, self.a_mean) + np.diag(self.noise.variances(self.dim))
        return QuadraticForm(quad, -2.0 * self.b * self.a_mean, self.b**2)

    def gradient_bound(self, feasible_set: FeasibleSet) -> float:
        reach = float(np.linalg.norm(np.abs(self.a_mean) + self.noise.magnitude_bound(self.dim)))
        return 2.0 * (reach * feasible_set.max_norm() + abs(self.b)) * reach
