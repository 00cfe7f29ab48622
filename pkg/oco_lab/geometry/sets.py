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
Concrete feasible sets: Euclidean ball, axis-aligned ellipsoid, ℓp ball, box and scaled simplex.
"""

from __future__ import annotations

import logging
import math
from typing import Dict
from typing import Optional
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from oco_lab.errors import ConfigError
from oco_lab.errors import ProjectionError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import UniformConvexity
from oco_lab.geometry.feasible_set import Vector
from oco_lab.geometry.feasible_set import dual_exponent
from oco_lab.geometry.feasible_set import lp_norm

logger = logging.getLogger(__name__)

KKT_TOLERANCE = 1e-8
SECULAR_TOLERANCE = 1e-15
ROOT_MAX_ITER = 200
_INNER_MAX_ITER = 100


def _uniform_ball(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """n points uniform in the Euclidean unit ball."""
    directions = rng.standard_normal((n, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = rng.random(n) ** (1.0 / dim)
    return directions * radii[:, None]


def _check_kkt(residual: float, scale: float, what: str):
    if not np.isfinite(residual) or residual > KKT_TOLERANCE * max(1.0, scale):
        raise ProjectionError(f"{what} projection KKT residual {residual:.3e} exceeds tolerance")


def secular_root(d: Sequence[float], b: Sequence[float]) -> float:
    """
    The μ >= 0 with Σ (b_i / (d_i + μ))^2 = 1, given d_i > 0 and Σ (b_i / d_i)^2 > 1.

    Newton runs on 1/sqrt(S(μ)) - 1, which is concave and increasing, so the iterates climb from 0 to the root
    without overshooting. The loop is over plain floats; d has a handful of entries.
    """
    pairs = [(float(d_i), float(b_i) ** 2) for d_i, b_i in zip(d, b)]
    mu = 0.0
    for _ in range(ROOT_MAX_ITER):
        total = 0.0
        cubic = 0.0
        for d_i, b2_i in pairs:
            inverse = 1.0 / (d_i + mu)
            term = b2_i * inverse * inverse
            total += term
            cubic += term * inverse
        root_total = math.sqrt(total)
        residual = 1.0 / root_total - 1.0
        if residual >= -SECULAR_TOLERANCE:
            return mu
        step = -residual * total * root_total / cubic
        if mu + step == mu:
            return mu
        mu += step
    raise ProjectionError(f"secular equation did not converge after {ROOT_MAX_ITER} Newton steps")


def _unit_ball_metric_projection(w: Vector, metric: np.ndarray) -> Vector:
    """argmin over the unit ball of (y - w)'N(y - w) for |w| > 1 and N positive definite."""
    eigenvalues, basis = np.linalg.eigh(metric)
    if not eigenvalues[0] > 0.0:
        raise ProjectionError(f"metric must be positive definite, smallest eigenvalue {eigenvalues[0]:.3e}")
    coefficients = basis.T @ w
    weighted = eigenvalues * coefficients
    mu = secular_root(eigenvalues, weighted)
    return basis @ (weighted / (eigenvalues + mu))


class EuclideanBall(FeasibleSet):
    """Ball of the given radius around center; (1/r, 2)-uniformly convex in ℓ2."""

    kind = "euclidean_ball"

    def __init__(self, radius: float = 1.0, center: Optional[Sequence[float]] = None, dim: Optional[int] = None):
        if center is None:
            center = np.zeros(2 if dim is None else int(dim))
        center = np.array(center, dtype=float).reshape(-1)
        if dim is not None and center.shape[0] != dim:
            raise ConfigError(f"center has dimension {center.shape[0]}, expected {dim}")
        if center.shape[0] < 1 or not np.all(np.isfinite(center)):
            raise ConfigError("ball center must be a finite non-empty vector")
        if not radius > 0.0 or not np.isfinite(radius):
            raise ConfigError(f"ball radius must be positive, got {radius}")
        self.radius = float(radius)
        self._center = center
        super().__init__(center.shape[0], UniformConvexity(1.0 / self.radius, 2.0, "l2"), 1.0)

    def __repr__(self) -> str:
        return f"EuclideanBall(radius={self.radius}, center={self._center.tolist()})"

    def violation(self, x: np.ndarray) -> float:
        return float(np.linalg.norm(x - self._center) - self.radius)

    def gauge(self, v: np.ndarray):
        return np.linalg.norm(v, axis=-1) / self.radius

    def center(self) -> Vector:
        return self._center.copy()

    def diameter(self) -> float:
        return 2.0 * self.radius

    def max_norm(self) -> float:
        return float(np.linalg.norm(self._center) + self.radius)

    def sample_interior(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self._center + self.radius * _uniform_ball(rng, n, self.dim)

    def _project(self, z: Vector) -> Vector:
        offset = z - self._center
        return self._center + offset * (self.radius / np.linalg.norm(offset))

    def closed_form_mahalanobis(self, z: Vector, metric: np.ndarray) -> Vector:
        # scaling the metric by r^2 does not move the minimizer
        w = (z - self._center) / self.radius
        return self._center + self.radius * _unit_ball_metric_projection(w, metric)

    def _linear_minimizer(self, theta: Vector) -> Vector:
        return self._center - self.radius * theta / np.linalg.norm(theta)


class AxisEllipsoid(FeasibleSet):
    """
    Origin-centered ellipsoid {x : sum (x_i / a_i)^2 <= 1}.

    Its strong-convexity label is the smallest boundary curvature, min a / max a^2.
    """

    kind = "axis_ellipsoid"

    def __init__(self, semi_axes: Sequence[float]):
        a = np.array(semi_axes, dtype=float).reshape(-1)
        if a.shape[0] < 1 or not np.all(np.isfinite(a)) or np.any(a <= 0.0):
            raise ConfigError(f"semi-axes must be positive, got {semi_axes}")
        self.semi_axes = a
        super().__init__(a.shape[0], UniformConvexity(float(a.min() / a.max() ** 2), 2.0, "l2"), 1.0)

    @classmethod
    def w_lambda(cls, lam: float) -> "AxisEllipsoid":
        """The ellipse {x^2 + y^2 / lam^2 <= 1}, i.e. semi-axes (1, lam)."""
        if not 0.0 < lam <= 1.0:
            raise ConfigError(f"ellipse lambda must lie in (0, 1], got {lam}")
        return cls((1.0, lam))

    def __repr__(self) -> str:
        return f"AxisEllipsoid(semi_axes={self.semi_axes.tolist()})"

    def violation(self, x: np.ndarray) -> float:
        return float(np.sum((x / self.semi_axes) ** 2) - 1.0)

    def gauge(self, v: np.ndarray):
        return np.sqrt(np.sum((v / self.semi_axes) ** 2, axis=-1))

    def center(self) -> Vector:
        return np.zeros(self.dim)

    def diameter(self) -> float:
        return 2.0 * float(self.semi_axes.max())

    def max_norm(self) -> float:
        return float(self.semi_axes.max())

    def sample_interior(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return _uniform_ball(rng, n, self.dim) * self.semi_axes

    def _project(self, z: Vector) -> Vector:
        a2 = self.semi_axes**2
        mu = secular_root(a2, self.semi_axes * z)
        x = a2 * z / (a2 + mu)
        residual = float(np.linalg.norm(x + mu * x / a2 - z)) + abs(self.violation(x))
        _check_kkt(residual, float(np.linalg.norm(z)), "ellipsoid")
        return x

    def closed_form_mahalanobis(self, z: Vector, metric: np.ndarray) -> Vector:
        a = self.semi_axes
        return a * _unit_ball_metric_projection(z / a, a[:, None] * metric * a[None, :])

    def _linear_minimizer(self, theta: Vector) -> Vector:
        a2 = self.semi_axes**2
        return -a2 * theta / np.sqrt(np.sum(a2 * theta**2))


class LpBall(FeasibleSet):
    """
    Origin-centered ℓp ball of the given radius, 1 <= p < inf.

    For p >= 2 the set is (1/p, p)-uniformly convex in its own norm and ξ = d^(1/2 - 1/p).
    """

    kind = "lp_ball"

    def __init__(self, p: float, radius: float = 1.0, dim: int = 2):
        if not 1.0 <= p < np.inf:
            raise ConfigError(f"p must satisfy 1 <= p < inf, got {p}")
        if not radius > 0.0 or not np.isfinite(radius):
            raise ConfigError(f"radius must be positive, got {radius}")
        if int(dim) < 1:
            raise ConfigError(f"dim must be at least 1, got {dim}")
        self.p = float(p)
        self.radius = float(radius)
        if self.p >= 2.0:
            uniform_convexity = UniformConvexity(1.0 / self.p, self.p, "lp")
            xi = float(int(dim) ** (0.5 - 1.0 / self.p))
        else:
            uniform_convexity = None
            xi = 1.0
        super().__init__(int(dim), uniform_convexity, xi)

    def __repr__(self) -> str:
        return f"LpBall(p={self.p}, radius={self.radius}, dim={self.dim})"

    def _norm_orders(self) -> Dict[str, float]:
        return {"l2": 2.0, "lp": self.p}

    def violation(self, x: np.ndarray) -> float:
        return float(lp_norm(x, self.p) - self.radius)

    def gauge(self, v: np.ndarray):
        return lp_norm(v, self.p) / self.radius

    def center(self) -> Vector:
        return np.zeros(self.dim)

    def diameter(self) -> float:
        if self.p >= 2.0:
            return 2.0 * self.radius * self.dim ** (0.5 - 1.0 / self.p)
        return 2.0 * self.radius

    def max_norm(self) -> float:
        return self.radius * self.dim ** max(0.0, 0.5 - 1.0 / self.p)

    def sample_interior(self, rng: np.random.Generator, n: int) -> np.ndarray:
        # Generalized-Gaussian coordinates plus an exponential slack give the uniform law on the ℓp ball.
        magnitudes = rng.gamma(1.0 / self.p, 1.0, size=(n, self.dim)) ** (1.0 / self.p)
        y = magnitudes * rng.choice((-1.0, 1.0), size=(n, self.dim))
        slack = rng.exponential(1.0, size=n)
        denominators = (np.sum(np.abs(y) ** self.p, axis=1) + slack) ** (1.0 / self.p)
        return self.radius * y / denominators[:, None]

    def _project(self, z: Vector) -> Vector:
        if self.p == 2.0:
            return z * (self.radius / np.linalg.norm(z))
        if self.p == 1.0:
            return _project_l1(z, self.radius)
        return self._project_kkt(z)

    def _project_kkt(self, z: Vector) -> Vector:
        p = self.p
        abs_z = np.abs(z)

        def magnitudes(mu: float) -> np.ndarray:
            return _solve_lp_stationarity(abs_z, mu, p)

        def excess(mu: float) -> float:
            return float(np.sum(magnitudes(mu) ** p) - self.radius**p)

        upper = 1.0
        for _ in range(ROOT_MAX_ITER):
            if excess(upper) <= 0.0:
                break
            upper *= 2.0
        else:
            raise ProjectionError("could not bracket the ℓp projection multiplier")
        mu, result = brentq(
            excess, 0.0, upper, xtol=1e-15, rtol=4.0 * np.finfo(float).eps, maxiter=ROOT_MAX_ITER,
            full_output=True, disp=False
        )
        if not result.converged:
            raise ProjectionError(f"ℓp multiplier search did not converge after {result.iterations} steps")
        x = np.sign(z) * magnitudes(mu)
        stationarity = float(np.linalg.norm(x - z + mu * p * np.sign(x) * np.abs(x) ** (p - 1.0)))
        residual = stationarity + abs(self.violation(x))
        _check_kkt(residual, float(np.linalg.norm(z)), "ℓp")
        return x

    def _linear_minimizer(self, theta: Vector) -> Vector:
        if self.p == 1.0:
            abs_theta = np.abs(theta)
            ties = abs_theta >= abs_theta.max() * (1.0 - 1e-12)
            x = np.where(ties, -np.sign(theta), 0.0)
            return self.radius * x / np.count_nonzero(ties)
        q = dual_exponent(self.p)
        scaled = np.abs(theta) / np.max(np.abs(theta))
        return -self.radius * np.sign(theta) * scaled ** (q - 1.0) / lp_norm(scaled, q) ** (q - 1.0)


def _solve_lp_stationarity(abs_z: np.ndarray, mu: float, p: float) -> np.ndarray:
    """
    Coordinatewise root u in [0, |z_i|] of u + mu*p*u^(p-1) = |z_i| by safeguarded Newton.
    The left side is increasing in u, so the bracket shrinks every iteration.
    """
    lo = np.zeros_like(abs_z)
    hi = abs_z.copy()
    u = abs_z.copy()
    scale = max(1.0, float(abs_z.max()))
    for _ in range(_INNER_MAX_ITER):
        h = u + mu * p * u ** (p - 1.0) - abs_z
        if float(np.max(np.abs(h))) <= 1e-15 * scale:
            break
        hi = np.where(h > 0.0, u, hi)
        lo = np.where(h <= 0.0, u, lo)
        with np.errstate(divide="ignore", invalid="ignore"):
            slope = 1.0 + mu * p * (p - 1.0) * u ** (p - 2.0)
            step = u - h / slope
        outside = ~np.isfinite(step) | (step < lo) | (step > hi)
        u_next = np.where(outside, 0.5 * (lo + hi), step)
        if float(np.max(np.abs(u_next - u))) <= 1e-16 * scale:
            u = u_next
            break
        u = u_next
    return u


def _project_l1(z: Vector, radius: float) -> Vector:
    """Sort-based projection onto the ℓ1 ball via the simplex of its magnitudes."""
    return np.sign(z) * _project_simplex(np.abs(z), radius)


def _project_simplex(v: np.ndarray, scale: float) -> np.ndarray:
    """Sort-based Euclidean projection onto {x >= 0, sum x = scale}."""
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u) - scale
    rho = np.nonzero(u * np.arange(1, v.shape[0] + 1) > cumulative)[0][-1]
    threshold = cumulative[rho] / (rho + 1.0)
    return np.maximum(v - threshold, 0.0)


class Box(FeasibleSet):
    """Axis-aligned box [lo, hi]. Flat facets, so no uniform-convexity label."""

    kind = "box"

    def __init__(self, lo: Sequence[float], hi: Sequence[float]):
        lo = np.array(lo, dtype=float).reshape(-1)
        hi = np.array(hi, dtype=float).reshape(-1)
        if lo.shape != hi.shape or lo.shape[0] < 1:
            raise ConfigError("box bounds must be non-empty vectors of equal length")
        if not np.all(np.isfinite(lo)) or not np.all(np.isfinite(hi)) or np.any(lo >= hi):
            raise ConfigError(f"box needs finite lo < hi coordinatewise, got lo={lo}, hi={hi}")
        self.lo = lo
        self.hi = hi
        self._mid = 0.5 * (lo + hi)
        self._half = 0.5 * (hi - lo)
        super().__init__(lo.shape[0], None, 1.0)

    def __repr__(self) -> str:
        return f"Box(lo={self.lo.tolist()}, hi={self.hi.tolist()})"

    def violation(self, x: np.ndarray) -> float:
        return float(max(np.max(self.lo - x), np.max(x - self.hi)))

    def gauge(self, v: np.ndarray):
        return np.max(np.abs(v) / self._half, axis=-1)

    def center(self) -> Vector:
        return self._mid.copy()

    def diameter(self) -> float:
        return float(np.linalg.norm(self.hi - self.lo))

    def max_norm(self) -> float:
        return float(np.linalg.norm(np.maximum(np.abs(self.lo), np.abs(self.hi))))

    def sample_interior(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.lo + (self.hi - self.lo) * rng.random((n, self.dim))

    def _project(self, z: Vector) -> Vector:
        return np.clip(z, self.lo, self.hi)

    def _linear_minimizer(self, theta: Vector) -> Vector:
        return np.where(theta > 0.0, self.lo, np.where(theta < 0.0, self.hi, self._mid))


class Simplex(FeasibleSet):
    """
    Scaled probability simplex {x >= 0, sum x = scale} in d >= 2 coordinates.

    The equality constraint is checked with tolerance 1e-12 * scale.
    """

    kind = "simplex"

    def __init__(self, scale: float = 1.0, dim: int = 3):
        if int(dim) < 2:
            raise ConfigError(f"simplex needs dim >= 2, got {dim}")
        if not scale > 0.0 or not np.isfinite(scale):
            raise ConfigError(f"simplex scale must be positive, got {scale}")
        self.scale = float(scale)
        super().__init__(int(dim), None, 1.0)
        self._barycenter = np.full(self.dim, self.scale / self.dim)

    def __repr__(self) -> str:
        return f"Simplex(scale={self.scale}, dim={self.dim})"

    def violation(self, x: np.ndarray) -> float:
        return float(max(-np.min(x), abs(np.sum(x) - self.scale) - 1e-12 * self.scale))

    def normalize_directions(self, v: np.ndarray) -> np.ndarray:
        return v - np.mean(v, axis=-1, keepdims=True)

    def gauge(self, v: np.ndarray):
        v = self.normalize_directions(np.asarray(v, dtype=float))
        return np.maximum(np.max(-v / self._barycenter, axis=-1), 0.0)

    def center(self) -> Vector:
        return self._barycenter.copy()

    def diameter(self) -> float:
        return self.scale * np.sqrt(2.0)

    def max_norm(self) -> float:
        return self.scale

    def sample_interior(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.scale * rng.dirichlet(np.ones(self.dim), size=n)

    def pull_inside(self, x) -> Vector:
        x = np.asarray(x, dtype=float)
        if self.violation(x) <= 0.0:
            return x
        clipped = np.maximum(x, 0.0)
        total = float(np.sum(clipped))
        if total <= 0.0:
            return self.center()
        return clipped * (self.scale / total)

    def _project(self, z: Vector) -> Vector:
        return _project_simplex(z, self.scale)

    def _linear_minimizer(self, theta: Vector) -> Vector:
        ties = theta <= theta.min() + 1e-12 * float(np.max(np.abs(theta)))
        return self.scale * ties.astype(float) / np.count_nonzero(ties)
