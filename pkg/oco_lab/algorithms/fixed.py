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
A learner that ignores feedback and always plays the same point.
"""

from __future__ import annotations

from typing import Optional

from oco_lab.algorithms.learner import Learner
from oco_lab.errors import ConfigError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.geometry.feasible_set import as_vector
from oco_lab.losses.loss_functions import LossFn


class FixedDecision(Learner):
    """Plays ``point`` every round; with point = x★ this is the zero-pseudo-regret oracle."""

    kind = "fixed"

    def __init__(self, feasible_set: FeasibleSet, point, gradient_bound: float = 1.0, horizon: int = 1):
        super().__init__(feasible_set, gradient_bound, horizon)
        self.point = as_vector(point, feasible_set.dim, name="point")
        if not feasible_set.contains(self.point):
            raise ConfigError(f"fixed decision {self.point} is outside the feasible set")

    def predict(self) -> Vector:
        return self.point.copy()

    def _update(self, g: Vector, x: Vector, loss: Optional[LossFn]):
        pass
