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
Base class for loss-sequence generators and the bounded symmetric noise they share.
"""

from __future__ import annotations

import logging
from abc import ABC
from abc import abstractmethod
from dataclasses import dataclass
from typing import ClassVar
from typing import NamedTuple
from typing import Optional
from typing import Tuple

import numpy as np

from oco_lab.errors import ConfigError
from oco_lab.errors import PreconditionError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.geometry.feasible_set import as_vector
from oco_lab.losses.loss_functions import LossFn

logger = logging.getLogger(__name__)

NOISE_KINDS = ("none", "rademacher", "uniform")


class Round(NamedTuple):
    """
    The loss the learner suffers and, for stochastic and corrupted kinds, the uncorrupted draw behind it.
    clean_loss is None when the environment is adversarial.
    """

    loss: LossFn
    clean_loss: Optional[LossFn]


@dataclass(frozen=True)
class NoiseSpec:
    """
    Symmetric bounded perturbation added coordinatewise to a mean vector.
    rademacher: ±amplitude with probability 1/2 each; uniform: U[-amplitude, amplitude].
    coords limits the perturbation to the listed coordinates (all of them when None).
    """

    kind: str = "none"
    amplitude: float = 0.0
    coords: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ConfigError(f"unknown noise kind {self.kind!r}; expected one of {NOISE_KINDS}")
        if not self.amplitude >= 0.0 or not np.isfinite(self.amplitude):
            raise ConfigError(f"noise amplitude must be nonnegative, got {self.amplitude}")
        if self.coords is not None:
            object.__setattr__(self, "coords", tuple(int(i) for i in self.coords))

    def mask(self, dim: int) -> np.ndarray:
        """Indicator of perturbed coordinates."""
        mask = np.zeros(dim)
        if self.kind == "none" or self.amplitude == 0.0:
            return mask
        if self.coords is None:
            return np.ones(dim)
        for i in self.coords:
            if not 0 <= i < dim:
                raise ConfigError(f"noise coordinate {i} out of range for dimension {dim}")
            mask[i] = 1.0
        return mask

    def sample(self, rng: np.random.Generator, dim: int) -> Vector:
        """One perturbation vector."""
        if self.kind == "none":
            return np.zeros(dim)
        if self.kind == "rademacher":
            signs = 2.0 * rng.integers(0, 2, size=dim) - 1.0
            return self.amplitude * signs * self.mask(dim)
        return self.amplitude * rng.uniform(-1.0, 1.0, size=dim) * self.mask(dim)

    def variances(self, dim: int) -> np.ndarray:
        """Per-coordinate variance of the perturbation."""
        per_coord = {"none": 0.0, "rademacher": self.amplitude**2, "uniform": self.amplitude**2 / 3.0}[self.kind]
        return per_coord * self.mask(dim)

    def magnitude_bound(self, dim: int) -> np.ndarray:
        """Coordinatewise bound on |perturbation|."""
        return self.amplitude * self.mask(dim)


class Environment(ABC):
    """
    Generator of one loss per round. An instance is confined to one run: ``start_run`` resets the bookkeeping
    and draws any per-run latent state from the run's generator.
    """

    kind: ClassVar[str] = "abstract"

    def __init__(self, dim: int):
        self.dim = int(dim)
        self.horizon: Optional[int] = None
        self.corruption_used = 0.0
        self.gradient_sum = np.zeros(self.dim)
        self._started = False

    def check_feasible_set(self, feasible_set: FeasibleSet):
        """Reject sets the construction is not defined on."""
        if feasible_set.dim != self.dim:
            raise ConfigError(f"{self.kind} is {self.dim}-dimensional but the set is {feasible_set.dim}-dimensional")

    def start_run(self, rng: np.random.Generator, horizon: int):
        """Reset bookkeeping and draw per-run state for a run of the given horizon."""
        if horizon < 1:
            raise ConfigError(f"horizon must be at least 1, got {horizon}")
        self.horizon = int(horizon)
        self.corruption_used = 0.0
        self.gradient_sum = np.zeros(self.dim)
        self._start(rng, self.horizon)
        self._started = True

    def _start(self, rng: np.random.Generator, horizon: int):
        """Per-run latent state; nothing by default."""

    def sample_round(self, rng: np.random.Generator, t: int, x_t) -> Round:
        """Draw the round-t loss. x_t is the learner's prediction; stochastic kinds ignore it."""
        if not self._started:
            raise PreconditionError("start_run must be called before sample_round")
        if t < 1:
            raise PreconditionError(f"round index must be at least 1, got {t}")
        x_t = as_vector(x_t, self.dim, name="x_t")
        drawn = self._draw(rng, t, x_t)
        self.gradient_sum += drawn.loss.gradient(x_t)
        return drawn

    @abstractmethod
    def _draw(self, rng: np.random.Generator, t: int, x_t: Vector) -> Round:
        """Kind-specific draw."""

    def mean_function(self) -> Optional[LossFn]:
        """Exact mean loss f° (the clean mean for corrupted kinds); None for adversarial kinds."""
        return None

    def run_mean_function(self) -> Optional[LossFn]:
        """
        Mean loss of the current run given what start_run drew. Equal to mean_function unless the kind draws
        latent parameters once per run; pseudo-regret and x★ of a run are measured against it.
        """
        return self.mean_function()

    @abstractmethod
    def gradient_bound(self, feasible_set: FeasibleSet) -> float:
        """G with |∇f_t(x)|_2 <= G on K for every loss the environment can emit."""

    def second_moment(self, u) -> float:
        """E[<g_t, u>^2] for linear kinds."""
        raise PreconditionError(f"{self.kind} does not emit linear losses")

    def growth_rate(self) -> Optional[float]:
        """L of the growth condition when the construction guarantees one."""
        return None

    def corruption_budget(self) -> Optional[float]:
        """Budget C for corrupted kinds."""
        return None
