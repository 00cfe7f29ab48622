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
Follow-the-leader with closed-form leaders for linear and quadratic losses.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from oco_lab.algorithms.learner import Learner
from oco_lab.errors import PreconditionError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.losses.loss_functions import Linear
from oco_lab.losses.loss_functions import LossFn
from oco_lab.losses.loss_functions import Quadratic


class FollowTheLeader(Learner):
    """
    Plays the minimizer of the cumulative loss so far.

    Linear losses keep Θ = Σ g_s and play linear_minimizer(K, Θ). Quadratic losses keep (Σ α_s, Σ α_s θ_s) and
    play the projection of the α-weighted mean of the θ_s. The two kinds cannot be mixed within one run.
    """

    kind = "ftl"

    def __init__(self, feasible_set: FeasibleSet, gradient_bound: float = 1.0, horizon: int = 1, diameter=None):
        super().__init__(feasible_set, gradient_bound, horizon, diameter)
        dim = feasible_set.dim
        self.mode: Optional[str] = None
        self.cumulative_gradient = np.zeros(dim)
        self.alpha_sum = 0.0
        self.weighted_theta = np.zeros(dim)

    def predict(self) -> Vector:
        if self.mode == "quadratic":
            return self.feasible_set.project(self.weighted_theta / self.alpha_sum)
        return self.feasible_set.linear_minimizer(self.cumulative_gradient)

    def _switch(self, mode: str):
        if self.mode not in (None, mode):
            raise PreconditionError(f"FTL state holds {self.mode} losses; cannot add a {mode} loss")
        self.mode = mode

    def _update(self, g: Vector, x: Vector, loss: Optional[LossFn]):
        if loss is None or isinstance(loss, Linear):
            self._switch("linear")
            self.cumulative_gradient += g
        elif isinstance(loss, Quadratic):
            self._switch("quadratic")
            self.alpha_sum += loss.alpha
            self.weighted_theta += loss.alpha * loss.theta
        else:
            raise PreconditionError(f"FTL has no closed-form leader for {loss.kind} losses")
