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
Universal learner that adapts to whichever curvature the losses have, without being told.

A grid of learning rates η_i = 2^-i / (5GD), i = 0..ceil(½ log2 T), carries two experts per rate:
    exp-concave:      ℓ_t^η(x) = -η<g_t, x_t - x> + η²<g_t, x_t - x>²      run by ONS
    strongly convex:  s_t^η(x) = -η<g_t, x_t - x> + η²G²|x - x_t|²        run by OGD with step 1/(2η²G²t)
plus one plain OGD expert on the linear loss, scored with rate η_c = 1/(2GD sqrt(T)).
The meta learner keeps log-domain exponential weights w(E) and plays
    x_t = Σ_E w(E) η_E x_t^E / Σ_E w(E) η_E.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any
from typing import Dict
from typing import List
from typing import NamedTuple
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from oco_lab.algorithms.learner import Learner
from oco_lab.algorithms.ogd import OnlineGradientDescent
from oco_lab.algorithms.ons import OnlineNewtonStep
from oco_lab.errors import InvariantViolation
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.losses.loss_functions import LossFn

logger = logging.getLogger(__name__)

EXP_CONCAVE = "exp_concave"
STRONGLY_CONVEX = "strongly_convex"
PLAIN = "plain"


class BoundConstants(NamedTuple):
    """Nominal constants of the universal regret bound for this learner."""

    c_sc: float
    c_sc_prime: float
    c_ec: float
    c_ec_prime: float
    c_g: float


@dataclass
class Expert:
    family: str
    eta: float
    learner: Learner
    log_weight: float
    point: Optional[Vector] = None


def surrogate_value(family: str, eta: float, gradient_bound: float, g: Vector, x_t: Vector, x: Vector) -> float:
    """Meta loss of an expert at point x for the round with gradient g at the meta prediction x_t."""
    inner = float(g @ (x_t - x))
    if family == STRONGLY_CONVEX:
        offset = x - x_t
        return -eta * inner + (eta * gradient_bound) ** 2 * float(offset @ offset)
    return -eta * inner + (eta * inner) ** 2


def surrogate_gradient(family: str, eta: float, gradient_bound: float, g: Vector, x_t: Vector, x: Vector) -> Vector:
    """Gradient of the expert's surrogate at x; the plain expert learns on g itself."""
    if family == PLAIN:
        return g
    if family == STRONGLY_CONVEX:
        return eta * g + 2.0 * (eta * gradient_bound) ** 2 * (x - x_t)
    return eta * g + 2.0 * eta**2 * float(g @ (x - x_t)) * g


def learning_rate_grid(gradient_bound: float, diameter: float, horizon: int) -> List[float]:
    """η_i = 2^-i / (5GD) for i = 0..ceil(½ log2 T)."""
    levels = math.ceil(0.5 * math.log2(horizon)) + 1
    return [2.0**-i / (5.0 * gradient_bound * diameter) for i in range(levels)]


class UniversalLearner(Learner):
    """Horizon-aware universal learner; see the module docstring for the construction."""

    kind = "universal"

    def __init__(
        self, feasible_set: FeasibleSet, gradient_bound: float, horizon: int, diameter: Optional[float] = None
    ):
        super().__init__(feasible_set, gradient_bound, horizon, diameter)
        G = self.gradient_bound  # pylint: disable=invalid-name
        D = self.diameter  # pylint: disable=invalid-name
        self.etas = learning_rate_grid(G, D, self.horizon)
        self.plain_eta = 1.0 / (2.0 * G * D * math.sqrt(self.horizon))

        self.experts: List[Expert] = []
        for eta in self.etas:
            surrogate_bound = eta * G * (1.0 + 2.0 * eta * G * D)
            ons = OnlineNewtonStep(
                feasible_set, surrogate_bound, self.horizon, gamma=0.5 * min(1.0 / (4.0 * surrogate_bound * D), 1.0),
                epsilon=1.0, diameter=D
            )
            self.experts.append(Expert(EXP_CONCAVE, eta, ons, 0.0))
            ogd = OnlineGradientDescent(
                feasible_set, G, self.horizon, schedule="strongly_convex", alpha=2.0 * (eta * G) ** 2, diameter=D
            )
            self.experts.append(Expert(STRONGLY_CONVEX, eta, ogd, 0.0))
        plain = OnlineGradientDescent(feasible_set, G, self.horizon, schedule="general", diameter=D)
        self.experts.append(Expert(PLAIN, self.plain_eta, plain, 0.0))

        prior = -math.log(len(self.experts))
        for expert in self.experts:
            expert.log_weight = prior
        self._etas = np.array([expert.eta for expert in self.experts])
        self._last: Optional[Vector] = None
        logger.debug("universal learner: %d rate levels, %d experts", len(self.etas), len(self.experts))

    def log_weights(self) -> np.ndarray:
        """Normalized meta log-weights, one per expert."""
        return np.array([expert.log_weight for expert in self.experts])

    def predict(self) -> Vector:
        points = []
        for expert in self.experts:
            expert.point = expert.learner.predict()
            points.append(expert.point)
        log_tilted = self.log_weights() + np.log(self._etas)
        tilted = np.exp(log_tilted - logsumexp(log_tilted))
        self._last = self.feasible_set.pull_inside(tilted @ np.array(points))
        return self._last.copy()

    def _update(self, g: Vector, x: Vector, loss: Optional[LossFn]):
        if self._last is None:
            self.predict()
        G = self.gradient_bound  # pylint: disable=invalid-name
        for expert in self.experts:
            expert.log_weight -= surrogate_value(expert.family, expert.eta, G, g, x, expert.point)
            expert.learner.update(surrogate_gradient(expert.family, expert.eta, G, g, x, expert.point), expert.point)
            expert.point = None

        log_weights = self.log_weights()
        normalizer = logsumexp(log_weights)
        if not np.isfinite(normalizer) or not np.all(np.isfinite(log_weights)):
            raise InvariantViolation("universal meta log-weights became non-finite")
        for expert in self.experts:
            expert.log_weight -= normalizer
        self._last = None

    def bound_constants(self) -> BoundConstants:
        """(C_sc, C_sc', C_ec, C_ec', C_g) = (G, GD, sqrt(d), GD + d, 1)."""
        G = self.gradient_bound  # pylint: disable=invalid-name
        D = self.diameter  # pylint: disable=invalid-name
        dim = self.feasible_set.dim
        return BoundConstants(G, G * D, math.sqrt(dim), G * D + dim, 1.0)

    def expert_summary(self) -> List[Dict[str, Any]]:
        """Per-expert family, rate and current meta weight."""
        weights = np.exp(self.log_weights())
        return [
            {"family": expert.family, "eta": expert.eta, "weight": float(weight)}
            for expert, weight in zip(self.experts, weights)
        ]
