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
Online Newton step for exp-concave losses.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from oco_lab.algorithms.learner import Learner
from oco_lab.errors import ConfigError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.geometry.mahalanobis import mahalanobis_project
from oco_lab.losses.loss_functions import LossFn


def default_gamma(gradient_bound: float, diameter: float) -> float:
    """γ = ½ min{1/(4GD), 1}."""
    return 0.5 * min(1.0 / (4.0 * gradient_bound * diameter), 1.0)


class OnlineNewtonStep(Learner):
    """
    A_t = εI + Σ ∇_s ∇_s', x <- Π_K^{A_t}(x - (1/γ) A_t^{-1} ∇_t).
    """

    kind = "ons"

    # pylint: disable=too-many-arguments,too-many-positional-arguments
    def __init__(
        self,
        feasible_set: FeasibleSet,
        gradient_bound: float,
        horizon: int,
        gamma: Optional[float] = None,
        epsilon: float = 1.0,
        diameter: Optional[float] = None,
        initial_point=None,
    ):
        super().__init__(feasible_set, gradient_bound, horizon, diameter)
        if not epsilon > 0.0:
            raise ConfigError(f"epsilon must be positive, got {epsilon}")
        self.gamma = default_gamma(self.gradient_bound, self.diameter) if gamma is None else float(gamma)
        if not self.gamma > 0.0:
            raise ConfigError(f"gamma must be positive, got {gamma}")
        self.epsilon = float(epsilon)
        self.matrix = self.epsilon * np.eye(feasible_set.dim)
        self.x = self._initial_point(initial_point)

    def predict(self) -> Vector:
        return self.x.copy()

    def _update(self, g: Vector, x: Vector, loss: Optional[LossFn]):
        if not np.any(g):
            return
        self.matrix += np.outer(g, g)
        step = np.linalg.solve(self.matrix, g) / self.gamma
        self.x = mahalanobis_project(self.feasible_set, self.x - step, self.matrix)
