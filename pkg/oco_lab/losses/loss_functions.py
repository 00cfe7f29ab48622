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
Loss families with value/gradient oracles and Lipschitz bounds over a feasible set.

Every loss can be rewritten exactly as a QuadraticForm x'Qx + <c, x> + const, which is how cumulative losses
are accumulated for hindsight minimization.
"""

from __future__ import annotations

from abc import ABC
from abc import abstractmethod
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from oco_lab.errors import ConfigError
from oco_lab.errors import PreconditionError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.geometry.feasible_set import as_vector


class LossFn(ABC):
    """A differentiable convex loss on R^d."""

    kind: ClassVar[str] = "abstract"

    @property
    @abstractmethod
    def dim(self) -> int:
        """Dimension of the decision space."""

    @abstractmethod
    def value(self, x) -> float:
        """f(x)."""

    @abstractmethod
    def gradient(self, x) -> Vector:
        """∇f(x)."""

    @abstractmethod
    def lipschitz_bound(self, feasible_set: FeasibleSet) -> float:
        """An upper bound on sup over K of |∇f|_2, in closed form."""

    @abstractmethod
    def as_quadratic_form(self) -> "QuadraticForm":
        """The same function written as x'Qx + <c, x> + const."""

    def _point(self, x) -> Vector:
        return as_vector(x, self.dim)


@dataclass(frozen=True, eq=False)
class Linear(LossFn):
    """f(x) = <g, x>."""

    g: Vector
    kind: ClassVar[str] = "linear"

    def __post_init__(self):
        object.__setattr__(self, "g", as_vector(self.g, name="g"))

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def value(self, x) -> float:
        return float(self.g @ self._point(x))

    def gradient(self, x) -> Vector:
        self._point(x)
        return self.g.copy()

    def lipschitz_bound(self, feasible_set: FeasibleSet) -> float:
        return float(np.linalg.norm(self.g))

    def as_quadratic_form(self) -> "QuadraticForm":
        return QuadraticForm(np.zeros((self.dim, self.dim)), self.g, 0.0)


@dataclass(frozen=True, eq=False)
class Quadratic(LossFn):
    """f(x) = (α/2)|x - θ|^2, α-strongly convex in ℓ2."""

    theta: Vector
    alpha: float
    kind: ClassVar[str] = "quadratic"

    def __post_init__(self):
        object.__setattr__(self, "theta", as_vector(self.theta, name="theta"))
        if not self.alpha > 0.0 or not np.isfinite(self.alpha):
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def dim(self) -> int:
        return self.theta.shape[0]

    def value(self, x) -> float:
        offset = self._point(x) - self.theta
        return 0.5 * self.alpha * float(offset @ offset)

    def gradient(self, x) -> Vector:
        return self.alpha * (self._point(x) - self.theta)

    def lipschitz_bound(self, feasible_set: FeasibleSet) -> float:
        return self.alpha * (float(np.linalg.norm(self.theta)) + feasible_set.max_norm())

    def as_quadratic_form(self) -> "QuadraticForm":
        return QuadraticForm(
            0.5 * self.alpha * np.eye(self.dim), -self.alpha * self.theta, 0.5 * self.alpha * float(self.theta @ self.theta)
        )


@dataclass(frozen=True, eq=False)
class SquaredLinear(LossFn):
    """f(x) = (<a, x> - b)^2, exp-concave on bounded sets."""

    a: Vector
    b: float
    kind: ClassVar[str] = "squared_linear"

    def __post_init__(self):
        object.__setattr__(self, "a", as_vector(self.a, name="a"))
        if not np.isfinite(self.b):
            raise ConfigError(f"b must be finite, got {self.b}")
        object.__setattr__(self, "b", float(self.b))

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def _residual_range(self, feasible_set: FeasibleSet):
        return -feasible_set.support(-self.a) - self.b, feasible_set.support(self.a) - self.b

    def value(self, x) -> float:
        return (float(self.a @ self._point(x)) - self.b) ** 2

    def gradient(self, x) -> Vector:
        return 2.0 * (float(self.a @ self._point(x)) - self.b) * self.a

    def lipschitz_bound(self, feasible_set: FeasibleSet) -> float:
        low, high = self._residual_range(feasible_set)
        return 2.0 * max(abs(low), abs(high)) * float(np.linalg.norm(self.a))

    def exp_concavity_estimate(self, feasible_set: FeasibleSet) -> float:
        """β = 1 / (2 sup_K f), used only as a label."""
        low, high = self._residual_range(feasible_set)
        peak = max(low**2, high**2)
        return np.inf if peak == 0.0 else 1.0 / (2.0 * peak)

    def as_quadratic_form(self) -> "QuadraticForm":
        return QuadraticForm(np.outer(self.a, self.a), -2.0 * self.b * self.a, self.b**2)


@dataclass(frozen=True, eq=False)
class QuadraticForm(LossFn):
    """f(x) = x'Qx + <c, x> + const with Q symmetric positive semidefinite."""

    quad: np.ndarray
    linear: Vector
    const: float = 0.0
    kind: ClassVar[str] = "quadratic_form"

    def __post_init__(self):
        linear = as_vector(self.linear, name="c")
        quad = np.array(self.quad, dtype=float)
        dim = linear.shape[0]
        if quad.shape != (dim, dim) or not np.all(np.isfinite(quad)):
            raise ConfigError(f"Q must be a finite {dim}x{dim} matrix, got shape {quad.shape}")
        if not np.allclose(quad, quad.T, rtol=1e-12, atol=1e-12):
            raise ConfigError("Q must be symmetric")
        object.__setattr__(self, "quad", 0.5 * (quad + quad.T))
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "const", float(self.const))

    @property
    def dim(self) -> int:
        return self.linear.shape[0]

    def value(self, x) -> float:
        x = self._point(x)
        return float(x @ self.quad @ x + self.linear @ x) + self.const

    def gradient(self, x) -> Vector:
        return 2.0 * self.quad @ self._point(x) + self.linear

    def lipschitz_bound(self, feasible_set: FeasibleSet) -> float:
        spectral = float(np.linalg.norm(self.quad, ord=2))
        return 2.0 * spectral * feasible_set.max_norm() + float(np.linalg.norm(self.linear))

    def as_quadratic_form(self) -> "QuadraticForm":
        return self

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        if not isinstance(other, QuadraticForm):
            return NotImplemented
        if other.dim != self.dim:
            raise PreconditionError(f"cannot add forms of dimension {self.dim} and {other.dim}")
        return QuadraticForm(self.quad + other.quad, self.linear + other.linear, self.const + other.const)
