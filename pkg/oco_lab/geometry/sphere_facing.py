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
Smallest sphere through a boundary point u that encloses K and faces a given direction.

For a unit direction ĝ the radius is r★ = sup over x in K, x != u, of |x - u|^2 / (2 <ĝ, x - u>), and the center is
u + r★ ĝ. The supremum is estimated from a dense boundary sample, refined locally, and compared with the limit of
the ratio as x approaches u along the boundary (where the osculating curvature decides it).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List
from typing import Optional
from typing import Union

import numpy as np
from scipy.optimize import minimize
from scipy.optimize import minimize_scalar

from oco_lab.errors import PreconditionError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.geometry.feasible_set import as_vector

logger = logging.getLogger(__name__)

ANGLE_SAMPLES_2D = 4096
RANDOM_DIRECTIONS = 65536
NELDER_MEAD_STARTS = 64
TANGENT_DIRECTIONS = 8
DIVERGENCE_FACTOR = 1e6
DIVERGENCE_EXPONENT = 0.1
BOUNDARY_TOLERANCE = 1e-9
HALFSPACE_TOLERANCE = 1e-9
EXTRAPOLATION_STEP = 1e-3
EXCLUSION_RADIUS = 1e-4
GAMMA_AGREEMENT = 1e-6


@dataclass(frozen=True)
class SphereFacing:
    """Enclosing sphere through the anchor, centered along the facing direction."""

    center: Vector
    radius: float


@dataclass(frozen=True)
class NotSphereEnclosed:
    """The ratio diverges: no finite sphere through the anchor faces the direction and encloses K."""

    ratio: float
    witness: Optional[Vector] = None


class _SphereRatio:
    """Evaluates |x - u|^2 / (2 <ĝ, x - u>) at boundary points given by their radial directions."""

    def __init__(self, feasible_set: FeasibleSet, anchor: Vector, unit_grad: Vector):
        self.feasible_set = feasible_set
        self.anchor = anchor
        self.unit_grad = unit_grad
        self.exclusion = EXCLUSION_RADIUS * feasible_set.diameter()

    def ratios(self, points: np.ndarray, exclude: bool = True) -> np.ndarray:
        """
        Ratio per row; inf where the denominator vanishes. With exclude, points closer to the anchor than the
        exclusion radius give nan: there the denominator is within rounding noise of zero.
        """
        offsets = np.atleast_2d(points) - self.anchor
        numerators = np.sum(offsets**2, axis=1)
        denominators = 2.0 * offsets @ self.unit_grad
        ratios = np.full(numerators.shape, np.inf)
        positive = denominators > 0.0
        ratios[positive] = numerators[positive] / denominators[positive]
        if exclude:
            ratios[np.sqrt(numerators) < self.exclusion] = np.nan
        return ratios

    def ratio_for_direction(self, direction: np.ndarray) -> float:
        """Ratio at the boundary point in the given direction; 0 where it is undefined."""
        if not np.any(direction):
            return 0.0
        try:
            point = self.feasible_set.boundary_point(direction)
        except PreconditionError:
            return 0.0
        value = float(self.ratios(point)[0])
        return 0.0 if np.isnan(value) else value


def _sample_directions(dim: int, rng: np.random.Generator) -> np.ndarray:
    if dim == 2:
        angles = 2.0 * np.pi * np.arange(ANGLE_SAMPLES_2D) / ANGLE_SAMPLES_2D
        return np.column_stack((np.cos(angles), np.sin(angles)))
    return rng.standard_normal((RANDOM_DIRECTIONS, dim))


def _anchor_tangents(feasible_set: FeasibleSet, anchor: Vector, rng: np.random.Generator):
    """Unit radial direction of the anchor and unit tangent directions to step along."""
    base = feasible_set.normalize_directions((anchor - feasible_set.center())[None, :])[0]
    base = base / np.linalg.norm(base)
    if feasible_set.dim == 2:
        return base, [np.array([-base[1], base[0]])]
    raw = feasible_set.normalize_directions(rng.standard_normal((TANGENT_DIRECTIONS, feasible_set.dim)))
    tangents: List[np.ndarray] = []
    for vector in raw:
        vector = vector - (vector @ base) * base
        norm = np.linalg.norm(vector)
        if norm > 0.0:
            tangents.append(vector / norm)
    return base, tangents


def _growth_exponent(near: float, far: float) -> float:
    """p in r(h) ~ h^-p from r(h) and r(2h)."""
    return math.log(near / far) / math.log(2.0)


def _anchor_limit(sphere_ratio: _SphereRatio, rng: np.random.Generator) -> float:
    """
    Limit of the ratio as x -> u along the boundary, on every sampled side, by quadratic extrapolation
    of r(h), r(2h), r(3h) to h = 0. A ratio that keeps growing like a power of 1/h (a pole where the
    boundary is flatter than any circle) gives inf.
    """
    feasible_set = sphere_ratio.feasible_set
    base, tangents = _anchor_tangents(feasible_set, sphere_ratio.anchor, rng)

    best = 0.0
    for tangent in tangents:
        for side in (1.0, -1.0):
            values = []
            for multiple in (1.0, 2.0, 3.0):
                direction = base + side * multiple * EXTRAPOLATION_STEP * tangent
                values.append(float(sphere_ratio.ratios(feasible_set.boundary_point(direction), exclude=False)[0]))
            if any(np.isnan(value) for value in values):
                continue
            if not all(np.isfinite(value) for value in values):
                return np.inf
            near, middle, far = values
            if near > middle > far > 0.0 and _growth_exponent(near, middle) > DIVERGENCE_EXPONENT:
                logger.debug("ratio grows like h^-%.2f towards the anchor", _growth_exponent(near, middle))
                return np.inf
            best = max(best, 3.0 * near - 3.0 * middle + far)
    return best


def _refine_2d(sphere_ratio: _SphereRatio, best_index: int) -> float:
    width = 2.0 * np.pi / ANGLE_SAMPLES_2D
    center_angle = 2.0 * np.pi * best_index / ANGLE_SAMPLES_2D

    def negative_ratio(angle: float) -> float:
        return -sphere_ratio.ratio_for_direction(np.array([np.cos(angle), np.sin(angle)]))

    result = minimize_scalar(
        negative_ratio, bounds=(center_angle - width, center_angle + width), method="bounded",
        options={"xatol": 1e-12}
    )
    return -float(result.fun)


def _refine_nelder_mead(sphere_ratio: _SphereRatio, directions: np.ndarray, ratios: np.ndarray) -> float:
    finite = np.where(np.isfinite(ratios), ratios, -np.inf)
    starts = np.argsort(finite)[::-1][:NELDER_MEAD_STARTS]
    dim = directions.shape[1]
    best = 0.0
    for index in starts:
        if not np.isfinite(finite[index]):
            continue
        result = minimize(
            lambda v: -sphere_ratio.ratio_for_direction(v), directions[index], method="Nelder-Mead",
            options={"maxiter": 200 * dim, "xatol": 1e-10, "fatol": 1e-12}
        )
        best = max(best, -float(result.fun))
    return best


def min_enclosing_sphere_facing(
    feasible_set: FeasibleSet, anchor, grad, rng: Optional[np.random.Generator] = None
) -> Union[SphereFacing, NotSphereEnclosed]:
    """
    Smallest sphere through anchor, with center along grad from the anchor, that encloses K.
    :param feasible_set: the set K
    :param anchor: boundary point u
    :param grad: nonzero direction pointing from u into the half-space containing K
    :param rng: generator for the random directions used when d > 2 (a fixed seed by default)
    """
    anchor = as_vector(anchor, feasible_set.dim, name="anchor")
    grad = as_vector(grad, feasible_set.dim, name="grad")
    grad_norm = float(np.linalg.norm(grad))
    if grad_norm == 0.0:
        raise PreconditionError("grad must be nonzero")
    if not feasible_set.is_on_boundary(anchor, BOUNDARY_TOLERANCE):
        raise PreconditionError(f"anchor {anchor} is not on the boundary of {feasible_set!r}")
    rng = np.random.default_rng(0) if rng is None else rng
    unit_grad = grad / grad_norm
    sphere_ratio = _SphereRatio(feasible_set, anchor, unit_grad)

    directions = feasible_set.normalize_directions(_sample_directions(feasible_set.dim, rng))
    directions = directions[np.linalg.norm(directions, axis=1) > 0.0]
    points = feasible_set.boundary_point(directions)
    slopes = (points - anchor) @ unit_grad
    if float(slopes.min()) < -HALFSPACE_TOLERANCE:
        worst = points[int(np.argmin(slopes))]
        raise PreconditionError(f"grad points away from K: <ĝ, x - u> = {slopes.min():.3e} at x = {worst}")

    ratios = sphere_ratio.ratios(points)
    threshold = DIVERGENCE_FACTOR * feasible_set.diameter()
    valid = ~np.isnan(ratios)
    if not np.any(valid):
        raise PreconditionError("boundary sample collapsed onto the anchor")
    best_index = int(np.argmax(np.where(valid, ratios, -np.inf)))
    best = float(ratios[best_index])
    if best > threshold:
        logger.debug("ratio %.3e exceeds divergence threshold at %s", best, points[best_index])
        return NotSphereEnclosed(best, points[best_index])

    if feasible_set.dim == 2:
        best = max(best, _refine_2d(sphere_ratio, best_index))
    else:
        best = max(best, _refine_nelder_mead(sphere_ratio, directions, ratios))
    limit = _anchor_limit(sphere_ratio, rng)
    radius = max(best, limit)
    if radius > threshold:
        return NotSphereEnclosed(radius, anchor)
    if radius <= 0.0:
        raise PreconditionError("degenerate set: no boundary point away from the anchor")
    return SphereFacing(anchor + radius * unit_grad, radius)


class _CurvatureRatio:
    """Evaluates <grad, x - u> / |x - u|^2 at boundary points given by their radial directions."""

    def __init__(self, feasible_set: FeasibleSet, anchor: Vector, grad: Vector):
        self.feasible_set = feasible_set
        self.anchor = anchor
        self.grad = grad
        self.exclusion = EXCLUSION_RADIUS * feasible_set.diameter()

    def values(self, points: np.ndarray, exclude: bool = True) -> np.ndarray:
        offsets = np.atleast_2d(points) - self.anchor
        squared = np.sum(offsets**2, axis=1)
        values = np.full(squared.shape, np.nan)
        moved = squared > 0.0
        values[moved] = (offsets[moved] @ self.grad) / squared[moved]
        if exclude:
            values[np.sqrt(squared) < self.exclusion] = np.nan
        return values

    def for_direction(self, direction: np.ndarray) -> float:
        """Value at the boundary point in the given direction; inf where it is undefined."""
        if not np.any(direction):
            return np.inf
        try:
            point = self.feasible_set.boundary_point(direction)
        except PreconditionError:
            return np.inf
        value = float(self.values(point)[0])
        return np.inf if np.isnan(value) else value


def _curvature_at_anchor(ratio: _CurvatureRatio, rng: np.random.Generator) -> float:
    """Limit of the curvature ratio as x -> u along the boundary, the smallest over the sampled sides."""
    feasible_set = ratio.feasible_set
    base, tangents = _anchor_tangents(feasible_set, ratio.anchor, rng)
    lowest = np.inf
    for tangent in tangents:
        for side in (1.0, -1.0):
            values = []
            for multiple in (1.0, 2.0, 3.0):
                direction = base + side * multiple * EXTRAPOLATION_STEP * tangent
                values.append(float(ratio.values(feasible_set.boundary_point(direction), exclude=False)[0]))
            if any(np.isnan(value) for value in values):
                continue
            near, middle, far = values
            if near <= 0.0:
                return 0.0
            if near < middle < far and _growth_exponent(middle, near) > DIVERGENCE_EXPONENT:
                return 0.0
            lowest = min(lowest, 3.0 * near - 3.0 * middle + far)
    return lowest


def sampled_curvature(feasible_set: FeasibleSet, x_star, grad, rng: Optional[np.random.Generator] = None) -> float:
    """
    inf over x in K, x != x★, of <grad, x - x★> / |x - x★|^2, from a dense boundary sample refined locally
    and the limit at x★. Interior points never attain it: along a ray from x★ the ratio decreases.
    :param x_star: boundary point x★
    :param grad: gradient of the mean loss at x★
    """
    x_star = as_vector(x_star, feasible_set.dim, name="x_star")
    grad = as_vector(grad, feasible_set.dim, name="grad")
    if not np.any(grad):
        raise PreconditionError("grad must be nonzero")
    if not feasible_set.is_on_boundary(x_star, BOUNDARY_TOLERANCE):
        raise PreconditionError(f"x_star {x_star} is not on the boundary of {feasible_set!r}")
    rng = np.random.default_rng(0) if rng is None else rng
    ratio = _CurvatureRatio(feasible_set, x_star, grad)

    directions = feasible_set.normalize_directions(_sample_directions(feasible_set.dim, rng))
    directions = directions[np.linalg.norm(directions, axis=1) > 0.0]
    values = ratio.values(feasible_set.boundary_point(directions))
    valid = ~np.isnan(values)
    if not np.any(valid):
        raise PreconditionError("boundary sample collapsed onto x_star")
    masked = np.where(valid, values, np.inf)
    lowest = float(masked.min())
    if lowest <= 0.0:
        return 0.0

    if feasible_set.dim == 2:
        width = 2.0 * np.pi / ANGLE_SAMPLES_2D
        center_angle = 2.0 * np.pi * int(np.argmin(masked)) / ANGLE_SAMPLES_2D
        result = minimize_scalar(
            lambda angle: ratio.for_direction(np.array([np.cos(angle), np.sin(angle)])),
            bounds=(center_angle - width, center_angle + width), method="bounded", options={"xatol": 1e-12}
        )
        lowest = min(lowest, float(result.fun))
    else:
        for index in np.argsort(masked)[:NELDER_MEAD_STARTS]:
            result = minimize(
                ratio.for_direction, directions[index], method="Nelder-Mead",
                options={"maxiter": 200 * feasible_set.dim, "xatol": 1e-10, "fatol": 1e-12}
            )
            lowest = min(lowest, float(result.fun))
    return max(0.0, min(lowest, _curvature_at_anchor(ratio, rng)))


def gamma_star(feasible_set: FeasibleSet, x_star, grad) -> float:
    """
    Largest γ with <grad, x - x★> >= γ |x - x★|^2 on K; 0 when no enclosing sphere faces grad from x★.
    The sampled infimum is returned and checked against |grad| / (2 r★) from the enclosing sphere.
    """
    facing = min_enclosing_sphere_facing(feasible_set, x_star, grad)
    if isinstance(facing, NotSphereEnclosed):
        return 0.0
    direct = sampled_curvature(feasible_set, x_star, grad)
    from_sphere = float(np.linalg.norm(as_vector(grad, feasible_set.dim, name="grad"))) / (2.0 * facing.radius)
    if abs(direct - from_sphere) > GAMMA_AGREEMENT * from_sphere:
        logger.warning("sampled curvature %.9g disagrees with enclosing-sphere value %.9g", direct, from_sphere)
    return direct
