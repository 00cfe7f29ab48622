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
Frank–Wolfe minimization of convex quadratics over a feasible set, and the Mahalanobis projection built on it.
"""

from __future__ import annotations

import logging
from typing import NamedTuple
from typing import Optional

import numpy as np

from oco_lab.errors import PreconditionError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.geometry.feasible_set import as_vector

logger = logging.getLogger(__name__)

GAP_TOLERANCE = 1e-8
MAX_ITERATIONS = 200
MAHALANOBIS_MAX_ITERATIONS = 100


class FrankWolfeResult(NamedTuple):
    """Outcome of a Frank–Wolfe run. point is always a member of K."""

    point: Vector
    gap: float
    iterations: int
    converged: bool


def frank_wolfe_quadratic(
    feasible_set: FeasibleSet,
    quad: np.ndarray,
    linear: Vector,
    x0: Optional[Vector] = None,
    tol: float = GAP_TOLERANCE,
    max_iter: int = MAX_ITERATIONS,
) -> FrankWolfeResult:
    """
    Minimize x'Qx + <c, x> over K with exact line search.

    The gap tolerance is relative to the scale trace(Q) * diam^2 + |c| * diam of the objective, floored at 1.
    :param feasible_set: the set K, only its linear minimizer is used
    :param quad: symmetric positive semidefinite Q
    :param linear: c
    :param x0: starting point in K (canonical center by default)
    """
    dim = feasible_set.dim
    quad = np.asarray(quad, dtype=float)
    if quad.shape != (dim, dim):
        raise PreconditionError(f"quadratic term must be {dim}x{dim}, got {quad.shape}")
    linear = as_vector(linear, dim, name="c")
    x = feasible_set.center() if x0 is None else feasible_set.pull_inside(as_vector(x0, dim, name="x0"))

    diam = feasible_set.diameter()
    scale = max(1.0, float(np.trace(quad)) * diam**2 + float(np.linalg.norm(linear)) * diam)
    threshold = tol * scale

    gap = np.inf
    for iteration in range(max_iter + 1):
        grad = 2.0 * quad @ x + linear
        vertex = feasible_set.linear_minimizer(grad)
        direction = vertex - x
        gap = float(-grad @ direction)
        if gap <= threshold:
            return FrankWolfeResult(x, max(gap, 0.0), iteration, True)
        if iteration == max_iter:
            break
        curvature = float(direction @ quad @ direction)
        step = 1.0 if curvature <= 0.0 else min(1.0, gap / (2.0 * curvature))
        x = feasible_set.pull_inside(x + step * direction)

    logger.warning("Frank-Wolfe stopped after %d iterations with gap %.3e (threshold %.3e)", max_iter, gap, threshold)
    return FrankWolfeResult(x, gap, max_iter, False)


def mahalanobis_project(feasible_set: FeasibleSet, z, metric: np.ndarray) -> Vector:
    """
    argmin over K of (x - z)'M(x - z). Ellipsoids and balls solve it in closed form; other sets run Frank–Wolfe
    warm-started at the Euclidean projection and capped at MAHALANOBIS_MAX_ITERATIONS.
    :param metric: symmetric positive-definite M
    """
    z = as_vector(z, feasible_set.dim, name="z")
    if feasible_set.violation(z) <= 0.0:
        return z
    metric = np.asarray(metric, dtype=float)
    if metric.shape != (feasible_set.dim, feasible_set.dim) or not np.allclose(metric, metric.T):
        raise PreconditionError("metric must be a symmetric d x d matrix")
    exact = feasible_set.closed_form_mahalanobis(z, metric)
    if exact is not None:
        return feasible_set.pull_inside(exact)
    result = frank_wolfe_quadratic(
        feasible_set, metric, -2.0 * metric @ z, x0=feasible_set.project(z), max_iter=MAHALANOBIS_MAX_ITERATIONS
    )
    return result.point
