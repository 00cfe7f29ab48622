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
Checkable inequalities: the adaptive regret bound ratio, the Bernstein diagnostic and the
curvature lower bounds behind the fast rates.
"""
from __future__ import annotations

import logging
import math
from typing import NamedTuple
from typing import Optional

import numpy as np

from oco_lab.environments.environment import Environment
from oco_lab.errors import PreconditionError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.geometry.feasible_set import as_vector
from oco_lab.geometry.uniform_convexity import sample_mixed
from oco_lab.losses.loss_functions import Linear

logger = logging.getLogger(__name__)

BERNSTEIN_TOLERANCE = 1e-9
# Per-round slack allowed in the curvature lower bounds.
CURVATURE_TOLERANCE = 1e-6

SPHERE_LOWER_BOUND = "sphere_lower_bound"
UNIFORM_CONVEXITY_LOWER_BOUND = "uniform_convexity_lower_bound"


class BernsteinReport(NamedTuple):
    """Outcome of bernstein_check; worst_slack is min over samples of B<g°, x - x★> - E<g, x - x★>^2."""

    holds: bool
    worst_slack: float
    samples: int


class CurvatureCheck(NamedTuple):
    """One lower-bound inequality lhs >= rhs - tolerance evaluated on a run."""

    name: str
    lhs: float
    rhs: float
    tolerance: float

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs - self.tolerance


def bound61_ratio_from_sums(
    linear_sum: float, squared_distance_sum: float, gradient_bound: float, diameter: float, horizon: int
) -> float:
    """
    Σ<g_t, x_t - x★> / (G sqrt(V_T log T) + G D log T), from the two running sums; 0 when the numerator is
    not positive.
    """
    if horizon < 2:
        raise PreconditionError(f"the bound ratio needs T >= 2, got {horizon}")
    if linear_sum <= 0.0:
        return 0.0
    log_t = math.log(horizon)
    denominator = gradient_bound * math.sqrt(max(squared_distance_sum, 0.0) * log_t) + gradient_bound * diameter * log_t
    return linear_sum / denominator


# pylint: disable=too-many-arguments,too-many-positional-arguments
def bound61_ratio(points, gradients, x_star, gradient_bound: float, diameter: float, horizon: Optional[int] = None):
    """
    Ratio of the linearized regret of a trace to the adaptive bound G sqrt(V_T log T) + G D log T,
    V_T = Σ|x_t - x★|^2 and natural logarithms throughout.

    :param points: T x d array of predictions x_t
    :param gradients: T x d array of observed gradients g_t
    :param x_star: comparator
    :param horizon: T; defaults to the trace length
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    gradients = np.atleast_2d(np.asarray(gradients, dtype=float))
    if points.shape != gradients.shape:
        raise PreconditionError(f"trace shapes differ: {points.shape} vs {gradients.shape}")
    x_star = as_vector(x_star, points.shape[1], name="x_star")
    horizon = points.shape[0] if horizon is None else int(horizon)
    offsets = points - x_star
    return bound61_ratio_from_sums(
        float(np.sum(gradients * offsets)),
        float(np.sum(offsets * offsets)),
        gradient_bound,
        diameter,
        horizon,
    )


def bernstein_constant(gradient_bound: float, radius: float, grad) -> float:
    """2 G^2 ρ / |g°|_2, the Bernstein constant of a sphere-enclosed instance with enclosing radius ρ."""
    norm = float(np.linalg.norm(as_vector(grad, name="grad")))
    if norm == 0.0:
        raise PreconditionError("the Bernstein constant needs a nonzero mean gradient")
    return 2.0 * gradient_bound**2 * radius / norm


def bernstein_check(
    env: Environment,
    feasible_set: FeasibleSet,
    b_claim: float,
    samples: int,
    x_star: Optional[Vector] = None,
    rng: Optional[np.random.Generator] = None,
) -> BernsteinReport:
    """
    Check E[<g_t, x - x★>^2] <= B <g°, x - x★> on sampled points of K (x★ itself included),
    with the second moment in closed form over the gradient distribution.
    """
    mean = env.mean_function()
    if not isinstance(mean, Linear):
        raise PreconditionError(f"bernstein_check needs a stochastic linear environment, got {env.kind}")
    if not np.any(mean.g):
        raise PreconditionError("bernstein_check needs a nonzero mean gradient")
    if samples < 1:
        raise PreconditionError(f"samples must be positive, got {samples}")
    if x_star is None:
        x_star = feasible_set.linear_minimizer(mean.g)
    x_star = as_vector(x_star, feasible_set.dim, name="x_star")
    rng = rng or np.random.default_rng(0)

    points = np.vstack([x_star[None, :], sample_mixed(feasible_set, rng, samples)])
    worst = math.inf
    for x in points:
        offset = x - x_star
        slack = b_claim * float(mean.g @ offset) - env.second_moment(offset)
        worst = min(worst, slack)
    holds = worst >= -BERNSTEIN_TOLERANCE
    logger.debug("bernstein_check B=%.6g over %d points: worst slack %.3e", b_claim, points.shape[0], worst)
    return BernsteinReport(holds, float(worst), int(points.shape[0]))


def sphere_lower_bound_check(linear_sum: float, squared_distance_sum: float, gamma: float, horizon: int):
    """Σ<grad★, x_t - x★> >= γ★ V_T."""
    return CurvatureCheck(
        SPHERE_LOWER_BOUND, float(linear_sum), gamma * squared_distance_sum, CURVATURE_TOLERANCE * horizon
    )


def uniform_convexity_lower_bound_check(
    feasible_set: FeasibleSet, grad, linear_sum: float, squared_distance_sum: float, horizon: int
) -> Optional[CurvatureCheck]:
    """
    Σ<grad★, x_t - x★> >= (κ / 4ξ^q) |grad★|_* T^(1 - q/2) V_T^(q/2) on a (κ, q)-uniformly convex set;
    None when the set carries no uniform-convexity label.
    """
    label = feasible_set.uniform_convexity
    if label is None:
        return None
    q = label.q
    dual = float(feasible_set.dual_norm(grad, label.norm_tag))
    rhs = (
        label.kappa
        / (4.0 * feasible_set.xi**q)
        * dual
        * horizon ** (1.0 - q / 2.0)
        * max(squared_distance_sum, 0.0) ** (q / 2.0)
    )
    return CurvatureCheck(UNIFORM_CONVEXITY_LOWER_BOUND, float(linear_sum), rhs, CURVATURE_TOLERANCE * horizon)
