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
Quantities derived from an environment: the optimum of its mean loss, the growth margin of a gradient trace
and the corruption actually spent along a trace.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import NamedTuple
from typing import Optional
from typing import Sequence

import numpy as np

from oco_lab.environments.environment import Environment
from oco_lab.environments.environment import Round
from oco_lab.errors import CorruptionBudgetExceeded
from oco_lab.errors import InvariantViolation
from oco_lab.errors import PreconditionError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.geometry.mahalanobis import frank_wolfe_quadratic
from oco_lab.geometry.uniform_convexity import sample_mixed
from oco_lab.losses.loss_functions import Linear
from oco_lab.losses.loss_functions import LossFn
from oco_lab.losses.loss_functions import Quadratic

logger = logging.getLogger(__name__)

OPTIMALITY_SAMPLES = 512
OPTIMALITY_TOLERANCE = 1e-9


class OptimalPoint(NamedTuple):
    """Minimizer x★ of the mean loss over K and the mean gradient there."""

    x_star: Vector
    grad: Vector


def minimize_loss(loss: LossFn, feasible_set: FeasibleSet):
    """
    Minimizer of a single loss over K, plus the optimality slack of the method used
    (0 for the closed forms, the Frank–Wolfe gap otherwise).
    """
    if isinstance(loss, Linear):
        return feasible_set.linear_minimizer(loss.g), 0.0
    if isinstance(loss, Quadratic):
        return feasible_set.project(loss.theta), 0.0
    form = loss.as_quadratic_form()
    result = frank_wolfe_quadratic(feasible_set, form.quad, form.linear)
    return result.point, result.gap


def optimal_point(env: Environment, feasible_set: FeasibleSet, mean: Optional[LossFn] = None) -> OptimalPoint:
    """
    x★ = argmin over K of the mean loss, with ∇f°(x★); validated by sampled first-order optimality.
    :param mean: the loss to minimize, env.mean_function() by default
    """
    mean = env.mean_function() if mean is None else mean
    if mean is None:
        raise PreconditionError(f"{env.kind} has no mean loss")
    x_star, slack = minimize_loss(mean, feasible_set)
    grad = mean.gradient(x_star)

    rng = np.random.default_rng(1)
    points = sample_mixed(feasible_set, rng, OPTIMALITY_SAMPLES)
    worst = float(np.min((points - x_star) @ grad))
    scale = max(1.0, float(np.linalg.norm(grad)) * feasible_set.diameter())
    if worst < -(OPTIMALITY_TOLERANCE * scale + slack):
        raise InvariantViolation(f"first-order optimality fails at x* = {x_star}: min <grad, x - x*> = {worst:.3e}")
    return OptimalPoint(x_star, grad)


def growth_margin(gradients, level: float) -> float:
    """
    min over prefixes t of |g_1 + ... + g_t|_2 - tL.

    Prefixes whose float margin is negative are re-checked in exact rational arithmetic; a prefix that satisfies
    the growth condition exactly counts as margin 0.
    """
    gradients = np.atleast_2d(np.asarray(gradients, dtype=float))
    if gradients.shape[0] == 0 or gradients.size == 0:
        raise PreconditionError("growth_margin needs a nonempty trace")
    sums = np.cumsum(gradients, axis=0)
    rounds = np.arange(1, gradients.shape[0] + 1)
    margins = np.linalg.norm(sums, axis=1) - rounds * level

    suspects = np.nonzero(margins < 0.0)[0]
    if suspects.size:
        exact_level = Fraction(level)
        exact_sums = [Fraction(0)] * gradients.shape[1]
        suspect_set = set(int(i) for i in suspects)
        for t in range(int(suspects.max()) + 1):
            exact_sums = [total + Fraction(value) for total, value in zip(exact_sums, gradients[t])]
            if t in suspect_set:
                squared = sum(total * total for total in exact_sums)
                if squared >= ((t + 1) * exact_level) ** 2:
                    margins[t] = 0.0
    return float(margins.min())


def corruption_budget_used(rounds: Sequence[Round], feasible_set: FeasibleSet, budget: Optional[float] = None) -> float:
    """
    Σ_t sup over K of |f_t - f̃_t| for linear losses, via the support function of the difference.
    Raises CorruptionBudgetExceeded when a budget is given and the total goes past it.
    """
    total = 0.0
    for index, played in enumerate(rounds, start=1):
        if played.clean_loss is None:
            raise PreconditionError(f"round {index} has no clean loss; not a corrupted trace")
        if not isinstance(played.loss, Linear) or not isinstance(played.clean_loss, Linear):
            raise PreconditionError("corruption accounting supports linear losses only")
        difference = played.loss.g - played.clean_loss.g
        if np.any(difference):
            total += max(feasible_set.support(difference), feasible_set.support(-difference))
    if budget is not None and total > budget * (1.0 + 1e-12):
        raise CorruptionBudgetExceeded(f"corruption {total:.12g} exceeds budget {budget}")
    return total
