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
Deterministic one-dimensional sequence on which follow-the-leader keeps switching sides.
"""

from __future__ import annotations

import numpy as np

from oco_lab.environments.environment import Environment
from oco_lab.environments.environment import Round
from oco_lab.errors import ConfigError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.losses.loss_functions import Linear


class AlternatingAdversary(Environment):
    """g_1 = first, then g_t = amplitude * (-1)^t."""

    kind = "alternating_adversary"

    def __init__(self, first: float = -0.5, amplitude: float = 1.0):
        if not np.isfinite(first) or not amplitude > 0.0:
            raise ConfigError(f"need a finite first gradient and positive amplitude, got ({first}, {amplitude})")
        self.first = float(first)
        self.amplitude = float(amplitude)
        super().__init__(1)

    def gradient_at(self, t: int) -> float:
        """The scalar gradient of round t."""
        if t == 1:
            return self.first
        return self.amplitude if t % 2 == 0 else -self.amplitude

    def _draw(self, rng: np.random.Generator, t: int, x_t: Vector) -> Round:
        return Round(Linear(np.array([self.gradient_at(t)])), None)

    def gradient_bound(self, feasible_set: FeasibleSet) -> float:
        return max(abs(self.first), self.amplitude)
