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
Abstract convex body shared by every learner, environment and diagnostic.

Every concrete set knows its canonical center and a Minkowski gauge around that center. Membership,
the radial boundary map, sampling and the pull-inside repair are written once here in terms of those two.
"""

from __future__ import annotations

import logging
from abc import ABC
from abc import abstractmethod
from dataclasses import dataclass
from typing import Dict
from typing import Optional

import numpy as np

from oco_lab.errors import InvariantViolation
from oco_lab.errors import PreconditionError

logger = logging.getLogger(__name__)

# Dense float64 array of shape (d,)
Vector = np.ndarray


def as_vector(value, dim: Optional[int] = None, name: str = "x") -> Vector:
    """
    Copy a user-supplied point or gradient into a finite 1-D float64 array.
    :param value: anything numpy can turn into a vector (a scalar becomes a 1-vector)
    :param dim: expected dimension, or None to accept any
    :param name: name used in error messages
    """
    arr = np.array(value, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise PreconditionError(f"{name} must be a non-empty 1-D vector, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise PreconditionError(f"{name} has dimension {arr.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise PreconditionError(f"{name} has non-finite entries: {arr}")
    return arr


def dual_exponent(p: float) -> float:
    """Hölder conjugate of p, with 1 <-> inf."""
    if p == 1.0:
        return np.inf
    if np.isinf(p):
        return 1.0
    return p / (p - 1.0)


def lp_norm(v: np.ndarray, p: float):
    """ℓp norm along the last axis."""
    return np.linalg.norm(v, ord=p, axis=-1)


@dataclass(frozen=True)
class UniformConvexity:
    """Analytic (κ, q) label of a set, uniformly convex with respect to the norm named by norm_tag."""

    kappa: float
    q: float
    norm_tag: str = "l2"


class FeasibleSet(ABC):
    """
    A compact convex body K in R^d with nonempty relative interior.

    Subclasses implement the closed forms; this class turns them into the public operations and makes sure
    every point handed back to a caller passes ``contains`` with tolerance 0.
    """

    kind: str = "abstract"

    def __init__(self, dim: int, uniform_convexity: Optional[UniformConvexity] = None, xi: float = 1.0):
        self._dim = int(dim)
        self.uniform_convexity = uniform_convexity
        self.xi = float(xi)

    @property
    def dim(self) -> int:
        """Ambient dimension d."""
        return self._dim

    # ---------- closed forms supplied by each kind ----------
    @abstractmethod
    def violation(self, x: np.ndarray) -> float:
        """Amount by which x lies outside K; nonpositive iff x is in K."""

    @abstractmethod
    def gauge(self, v: np.ndarray):
        """Minkowski gauge of the offset v from the canonical center, along the last axis."""

    @abstractmethod
    def center(self) -> Vector:
        """Canonical center: ball/ellipsoid center, box midpoint, simplex barycenter."""

    @abstractmethod
    def diameter(self) -> float:
        """Euclidean diameter, in closed form."""

    @abstractmethod
    def max_norm(self) -> float:
        """max over K of the Euclidean norm."""

    @abstractmethod
    def sample_interior(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """n points of K, shape (n, d), drawn uniformly where that is cheap."""

    @abstractmethod
    def _project(self, z: Vector) -> Vector:
        """Euclidean projection of a point known to be outside K."""

    @abstractmethod
    def _linear_minimizer(self, theta: Vector) -> Vector:
        """argmin over K of <theta, x> for theta != 0."""

    def _norm_orders(self) -> Dict[str, float]:
        return {"l2": 2.0}

    def normalize_directions(self, v: np.ndarray) -> np.ndarray:
        """Map raw directions into the affine hull of K (identity for full-dimensional sets)."""
        return v

    # ---------- public operations ----------
    def contains(self, x, tol: float = 0.0) -> bool:
        """True iff x is in K, up to the given tolerance (exact by default)."""
        x = as_vector(x, self.dim)
        return bool(self.violation(x) <= tol)

    def project(self, z) -> Vector:
        """Euclidean projection onto K. Identity on K."""
        z = as_vector(z, self.dim, name="z")
        if self.violation(z) <= 0.0:
            return z
        return self.pull_inside(self._project(z))

    def linear_minimizer(self, theta) -> Vector:
        """A point of K minimizing <theta, x>; the canonical center when theta = 0."""
        theta = as_vector(theta, self.dim, name="theta")
        if not np.any(theta):
            return self.center()
        return self.pull_inside(self._linear_minimizer(theta))

    def support(self, theta) -> float:
        """Support function h_K(theta) = max over K of <theta, x>."""
        theta = as_vector(theta, self.dim, name="theta")
        return float(theta @ self.linear_minimizer(-theta))

    def boundary_point(self, directions) -> np.ndarray:
        """
        Radial map from the canonical center: the boundary point in each direction.
        :param directions: shape (d,) or (n, d); directions with zero gauge are rejected
        """
        v = np.asarray(directions, dtype=float)
        single = v.ndim == 1
        v = self.normalize_directions(np.atleast_2d(v))
        g = np.asarray(self.gauge(v), dtype=float)
        if np.any(~np.isfinite(g)) or np.any(g <= 0.0):
            raise PreconditionError("boundary_point needs nonzero directions")
        points = self.center() + v / g[:, None]
        return points[0] if single else points

    def sample_boundary(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """n boundary points in Gaussian-random directions, shape (n, d)."""
        return self.boundary_point(rng.standard_normal((n, self.dim)))

    def closed_form_mahalanobis(self, z: Vector, metric: np.ndarray) -> Optional[Vector]:
        """
        argmin over K of (x - z)'M(x - z) for z outside K and M positive definite, when the set has a closed
        form; None sends callers to Frank–Wolfe.
        """
        return None

    def is_on_boundary(self, u, tol: float = 1e-9) -> bool:
        """True when the gauge of u is 1 within tol."""
        u = as_vector(u, self.dim, name="u")
        v = self.normalize_directions((u - self.center())[None, :])
        return bool(abs(float(self.gauge(v)[0]) - 1.0) <= tol and self.violation(u) <= tol)

    def pull_inside(self, x) -> Vector:
        """
        Move a numerically-outside point toward the canonical center by the smallest relative amount
        that makes it a member of K with zero tolerance.
        """
        x = np.asarray(x, dtype=float)
        if self.violation(x) <= 0.0:
            return x
        c = self.center()
        v = x - c
        g = float(np.asarray(self.gauge(v[None, :]))[0])
        factor = 1.0 / g if g > 1.0 else 1.0
        for k in range(54):
            candidate = c + v * factor
            if self.violation(candidate) <= 0.0:
                return candidate
            factor *= 1.0 - 2.0 ** (k - 52)
        raise InvariantViolation(f"could not pull {x} inside {self!r}")

    # ---------- norms ----------
    def norm_order(self, norm_tag: str) -> float:
        """Exponent of the native norm named by norm_tag."""
        orders = self._norm_orders()
        if norm_tag not in orders:
            raise PreconditionError(f"norm tag {norm_tag!r} is not supported by {self.kind}; use one of {sorted(orders)}")
        return orders[norm_tag]

    def native_norm(self, v, norm_tag: str = "l2"):
        """Native norm of v (last axis)."""
        return lp_norm(np.asarray(v, dtype=float), self.norm_order(norm_tag))

    def dual_norm(self, v, norm_tag: str = "l2"):
        """Dual of the native norm of v (last axis)."""
        return lp_norm(np.asarray(v, dtype=float), dual_exponent(self.norm_order(norm_tag)))
