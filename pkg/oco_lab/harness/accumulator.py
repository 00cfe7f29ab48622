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
Running sums of round losses and the hindsight minimizer they define.
"""
from __future__ import annotations

from typing import Iterable
from typing import Optional
from typing import Tuple

import numpy as np

from oco_lab.errors import PreconditionError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.geometry.mahalanobis import frank_wolfe_quadratic
from oco_lab.losses.loss_functions import Linear
from oco_lab.losses.loss_functions import LossFn
from oco_lab.losses.loss_functions import Quadratic

LINEAR = "linear"
QUADRATIC = "quadratic"
FORM = "quadratic_form"


def _family(loss: LossFn) -> str:
    if isinstance(loss, Linear):
        return LINEAR
    if isinstance(loss, Quadratic):
        return QUADRATIC
    return FORM


class CumulativeLoss:
    """
    Sum of the losses seen so far, kept as one quadratic form x'Qx + <c, x> + const.

    Linear and quadratic sums also keep the statistics their closed-form minimizers need
    (sum of gradients, sum of alpha and sum of alpha * theta).
    """

    def __init__(self, dim: int):
        self.dim = int(dim)
        self.rounds = 0
        self.family: Optional[str] = None
        self.quad = np.zeros((self.dim, self.dim))
        self.linear = np.zeros(self.dim)
        self.const = 0.0
        self.alpha_sum = 0.0
        self.weighted_theta = np.zeros(self.dim)

    def add(self, loss: LossFn):
        """Fold one more loss into the sum."""
        if loss.dim != self.dim:
            raise PreconditionError(f"loss has dimension {loss.dim}, expected {self.dim}")
        family = _family(loss)
        if self.family is None:
            self.family = family
        elif family != self.family:
            raise PreconditionError(f"cannot mix {family} losses into a {self.family} sum")

        if family == LINEAR:
            self.linear += loss.g
        elif family == QUADRATIC:
            self.alpha_sum += loss.alpha
            self.weighted_theta += loss.alpha * loss.theta
            self.quad[np.diag_indices(self.dim)] += 0.5 * loss.alpha
            self.linear -= loss.alpha * loss.theta
            self.const += 0.5 * loss.alpha * float(loss.theta @ loss.theta)
        else:
            form = loss.as_quadratic_form()
            self.quad += form.quad
            self.linear += form.linear
            self.const += form.const
        self.rounds += 1

    def value(self, x) -> float:
        """Σ_t f_t(x)."""
        x = np.asarray(x, dtype=float)
        return float(x @ self.quad @ x + self.linear @ x) + self.const

    def minimizer(self, feasible_set: FeasibleSet) -> Tuple[Vector, float]:
        """
        argmin over K of the sum, and the optimality slack of the method (0 for the closed forms).
        An empty or all-zero linear sum returns the canonical center.
        """
        if self.family is None or self.family == LINEAR:
            return feasible_set.linear_minimizer(self.linear), 0.0
        if self.family == QUADRATIC:
            # Σ α_t/2 |x - θ_t|^2 differs from (Σα)/2 |x - θ̄|^2 by a constant.
            return feasible_set.project(self.weighted_theta / self.alpha_sum), 0.0
        result = frank_wolfe_quadratic(feasible_set, self.quad, self.linear)
        return result.point, result.gap


def hindsight_minimizer(losses: Iterable[LossFn], feasible_set: FeasibleSet) -> Vector:
    """The single decision in K that minimizes the total of the given losses."""
    cumulative = CumulativeLoss(feasible_set.dim)
    for loss in losses:
        cumulative.add(loss)
    return cumulative.minimizer(feasible_set)[0]
