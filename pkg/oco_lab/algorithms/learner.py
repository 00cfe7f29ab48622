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
Common predict/update contract of every online learner.
"""

from __future__ import annotations

from abc import ABC
from abc import abstractmethod
from typing import ClassVar
from typing import Optional

import numpy as np

from oco_lab.errors import ConfigError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.geometry.feasible_set import as_vector
from oco_lab.losses.loss_functions import LossFn


class Learner(ABC):
    """
    A deterministic online learner over K. Each round the caller asks for ``predict()``, then reports the
    gradient observed at that prediction through ``update``.
    """

    kind: ClassVar[str] = "abstract"

    def __init__(
        self, feasible_set: FeasibleSet, gradient_bound: float, horizon: int, diameter: Optional[float] = None
    ):
        if not gradient_bound > 0.0 or not np.isfinite(gradient_bound):
            raise ConfigError(f"gradient bound G must be positive, got {gradient_bound}")
        if int(horizon) < 1:
            raise ConfigError(f"horizon must be at least 1, got {horizon}")
        diameter = feasible_set.diameter() if diameter is None else float(diameter)
        if not diameter > 0.0 or not np.isfinite(diameter):
            raise ConfigError(f"diameter D must be positive, got {diameter}")
        self.feasible_set = feasible_set
        self.gradient_bound = float(gradient_bound)
        self.horizon = int(horizon)
        self.diameter = diameter
        # rounds completed
        self.rounds = 0

    def _initial_point(self, initial_point) -> Vector:
        if initial_point is None:
            return self.feasible_set.center()
        point = as_vector(initial_point, self.feasible_set.dim, name="initial_point")
        if not self.feasible_set.contains(point):
            raise ConfigError(f"initial point {point} is outside the feasible set")
        return point

    @abstractmethod
    def predict(self) -> Vector:
        """The decision for the next round; always a member of K."""

    def update(self, g, x, loss: Optional[LossFn] = None):
        """
        Feed back the gradient observed at the last prediction.
        :param g: ∇f_t(x_t)
        :param x: the prediction x_t the gradient was taken at
        :param loss: the full loss, for learners with closed-form state (ignored by gradient-only learners)
        """
        dim = self.feasible_set.dim
        g = as_vector(g, dim, name="g")
        x = as_vector(x, dim, name="x_t")
        self._update(g, x, loss)
        self.rounds += 1

    @abstractmethod
    def _update(self, g: Vector, x: Vector, loss: Optional[LossFn]):
        """Kind-specific update on validated inputs."""
