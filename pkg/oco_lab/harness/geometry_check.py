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
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional
from typing import Union

import numpy as np

from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.geometry.feasible_set import as_vector
from oco_lab.geometry.sets import AxisEllipsoid
from oco_lab.geometry.sphere_facing import NotSphereEnclosed
from oco_lab.geometry.sphere_facing import SphereFacing
from oco_lab.geometry.sphere_facing import min_enclosing_sphere_facing

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeometryReport:
    """Enclosing-sphere estimate at an anchor, with the closed form when the set has one."""

    set_label: str
    anchor: Vector
    grad: Vector
    facing: Union[SphereFacing, NotSphereEnclosed]
    gamma: float
    analytic: Optional[SphereFacing] = None

    @property
    def enclosed(self) -> bool:
        return isinstance(self.facing, SphereFacing)

    @property
    def center_error(self) -> Optional[float]:
        if self.analytic is None or not self.enclosed:
            return None
        return float(np.max(np.abs(self.facing.center - self.analytic.center)))

    @property
    def radius_error(self) -> Optional[float]:
        if self.analytic is None or not self.enclosed:
            return None
        return abs(self.facing.radius - self.analytic.radius)


def ellipse_sphere(lam: float, mirror: bool = False) -> SphereFacing:
    """
    Enclosing sphere of W_λ at (0, -λ) facing up: center (0, (1 - λ^2)/λ), radius 1/λ.
    The mirrored anchor (0, λ) facing down gives center (0, -(1 - λ^2)/λ).
    """
    offset = (1.0 - lam**2) / lam
    return SphereFacing(np.array([0.0, offset if not mirror else -offset]), 1.0 / lam)


def _ellipse_analytic(feasible_set: FeasibleSet, anchor: Vector, grad: Vector) -> Optional[SphereFacing]:
    """Closed form for W_λ at a pole with the gradient along the minor axis, else None."""
    if not isinstance(feasible_set, AxisEllipsoid) or feasible_set.dim != 2:
        return None
    major, lam = feasible_set.semi_axes
    if major != 1.0 or lam > 1.0 or abs(anchor[0]) > 1e-12 or grad[0] != 0.0:
        return None
    if abs(anchor[1] + lam) <= 1e-12 and grad[1] > 0.0:
        return ellipse_sphere(lam)
    if abs(anchor[1] - lam) <= 1e-12 and grad[1] < 0.0:
        return ellipse_sphere(lam, mirror=True)
    return None


def geometry_report(feasible_set: FeasibleSet, anchor, grad) -> GeometryReport:
    """Estimate the enclosing sphere and γ★ = |grad| / (2r) at the anchor."""
    anchor = as_vector(anchor, feasible_set.dim, name="anchor")
    grad = as_vector(grad, feasible_set.dim, name="grad")
    facing = min_enclosing_sphere_facing(feasible_set, anchor, grad)
    if isinstance(facing, SphereFacing):
        gamma = float(np.linalg.norm(grad)) / (2.0 * facing.radius)
    else:
        gamma = 0.0
        logger.info("%r is not sphere-enclosed at %s (ratio %.3e)", feasible_set, anchor.tolist(), facing.ratio)
    return GeometryReport(repr(feasible_set), anchor, grad, facing, gamma, _ellipse_analytic(feasible_set, anchor, grad))
