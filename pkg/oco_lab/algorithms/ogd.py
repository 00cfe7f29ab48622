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
Projected online gradient descent.
"""

from __future__ import annotations

import math
from typing import Optional

from oco_lab.algorithms.learner import Learner
from oco_lab.errors import ConfigError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.losses.loss_functions import LossFn

SCHEDULES = ("general", "strongly_convex", "constant")


class OnlineGradientDescent(Learner):
    """
    x <- Π_K(x - η_t g_t) with one of three step schedules:
        general:          η_t = D / (G sqrt(t))
        strongly_convex:  η_t = 1 / (α t)
        constant:         η_t = η
    """

    kind = "ogd"

    # pylint: disable=too-many-arguments,too-many-positional-arguments
    def __init__(
        self,
        feasible_set: FeasibleSet,
        gradient_bound: float,
        horizon: int,
        schedule: str = "general",
        alpha: Optional[float] = None,
        eta: Optional[float] = None,
        diameter: Optional[float] = None,
        initial_point=None,
    ):
        super().__init__(feasible_set, gradient_bound, horizon, diameter)
        if schedule not in SCHEDULES:
            raise ConfigError(f"unknown OGD schedule {schedule!r}; expected one of {SCHEDULES}")
        if schedule == "strongly_convex" and not (alpha is not None and alpha > 0.0):
            raise ConfigError("the strongly_convex schedule needs alpha > 0")
        if schedule == "constant" and not (eta is not None and eta > 0.0):
            raise ConfigError("the constant schedule needs eta > 0")
        self.schedule = schedule
        self.alpha = alpha
        self.eta = eta
        self.x = self._initial_point(initial_point)

    def step_size(self, t: int) -> float:
        """η_t for round t >= 1."""
        if self.schedule == "general":
            return self.diameter / (self.gradient_bound * math.sqrt(t))
        if self.schedule == "strongly_convex":
            return 1.0 / (self.alpha * t)
        return self.eta

    def predict(self) -> Vector:
        return self.x.copy()

    def _update(self, g: Vector, x: Vector, loss: Optional[LossFn]):
        self.x = self.feasible_set.project(self.x - self.step_size(self.rounds + 1) * g)
