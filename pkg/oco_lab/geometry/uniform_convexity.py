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
Randomized checks of (κ, q)-uniform convexity and of the support inequality it implies.

Chord check: for x, y in K, θ in [0, 1] and z with native norm 1,
    θx + (1 - θ)y + θ(1 - θ)(κ/2)|x - y|^q z  must lie in K.
Support check: with y★ = argmin over K of <g, y>,
    <g, y - y★> >= (κ/4)|y - y★|^q |g|_dual  for every y in K.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Dict
from typing import Optional

import numpy as np

from oco_lab.errors import PreconditionError
from oco_lab.geometry.feasible_set import FeasibleSet

logger = logging.getLogger(__name__)

WITNESS_TOLERANCE = 1e-9


@dataclass
class WitnessReport:
    """worst_margin is the largest violation seen; the check holds when it stays within tolerance."""

    holds: bool
    worst_margin: float
    trials: int
    counterexample: Optional[Dict[str, Any]] = field(default=None)


def sample_mixed(feasible_set: FeasibleSet, rng: np.random.Generator, n: int) -> np.ndarray:
    """n points of K, each on the boundary with probability 1/2 and otherwise from the interior sampler."""
    on_boundary = rng.random(n) < 0.5
    boundary = feasible_set.sample_boundary(rng, n)
    interior = feasible_set.sample_interior(rng, n)
    points = np.where(on_boundary[:, None], boundary, interior)
    return np.array([feasible_set.pull_inside(point) for point in points])


def _unit_native(feasible_set: FeasibleSet, rng: np.random.Generator, n: int, norm_tag: str) -> np.ndarray:
    raw = rng.standard_normal((n, feasible_set.dim))
    raw = feasible_set.normalize_directions(raw)
    return raw / feasible_set.native_norm(raw, norm_tag)[:, None]


def check_chord_inclusion(
    feasible_set: FeasibleSet, kappa: float, q: float, norm_tag: str, trials: int, rng: np.random.Generator,
    tol: float = WITNESS_TOLERANCE
) -> WitnessReport:
    """Sampled chord check of the uniform-convexity definition."""
    xs = sample_mixed(feasible_set, rng, trials)
    ys = sample_mixed(feasible_set, rng, trials)
    thetas = rng.random(trials)
    zs = _unit_native(feasible_set, rng, trials, norm_tag)
    gaps = feasible_set.native_norm(xs - ys, norm_tag) ** q
    bumps = (thetas * (1.0 - thetas) * 0.5 * kappa * gaps)[:, None] * zs
    points = thetas[:, None] * xs + (1.0 - thetas[:, None]) * ys + bumps

    worst = -np.inf
    counterexample = None
    for i, point in enumerate(points):
        margin = feasible_set.violation(point)
        if margin > worst:
            worst = margin
            if margin > tol:
                counterexample = {"x": xs[i], "y": ys[i], "theta": float(thetas[i]), "z": zs[i], "point": point}
    return WitnessReport(worst <= tol, float(worst), trials, counterexample)


def check_support_inequality(
    feasible_set: FeasibleSet, kappa: float, q: float, norm_tag: str, trials: int, rng: np.random.Generator,
    tol: float = WITNESS_TOLERANCE
) -> WitnessReport:
    """Sampled check of <g, y - y★> >= (κ/4)|y - y★|^q |g|_dual."""
    ys = sample_mixed(feasible_set, rng, trials)
    gs = feasible_set.normalize_directions(rng.standard_normal((trials, feasible_set.dim)))
    worst = -np.inf
    counterexample = None
    for y, g in zip(ys, gs):
        if not np.any(g):
            continue
        y_star = feasible_set.linear_minimizer(g)
        gain = float(g @ (y - y_star))
        required = 0.25 * kappa * float(feasible_set.native_norm(y - y_star, norm_tag)) ** q
        required *= float(feasible_set.dual_norm(g, norm_tag))
        margin = required - gain
        if margin > worst:
            worst = margin
            if margin > tol:
                counterexample = {"y": y, "g": g, "y_star": y_star, "gain": gain, "required": required}
    return WitnessReport(worst <= tol, float(worst), trials, counterexample)


def uniform_convexity_witness(
    feasible_set: FeasibleSet,
    kappa: float,
    q: float,
    norm_tag: str = "l2",
    trials: int = 1000,
    rng: Optional[np.random.Generator] = None,
    check_definition: bool = True,
    check_support: bool = True,
) -> WitnessReport:
    """
    Search for a counterexample to (κ, q)-uniform convexity of K in the named norm.
    Returns the first failing report, or a passing report carrying the worst margin of both checks.
    """
    if trials < 1:
        raise PreconditionError(f"trials must be at least 1, got {trials}")
    if not kappa > 0.0 or q < 2.0:
        raise PreconditionError(f"need kappa > 0 and q >= 2, got ({kappa}, {q})")
    feasible_set.norm_order(norm_tag)
    rng = np.random.default_rng(0) if rng is None else rng

    reports = []
    if check_definition:
        reports.append(check_chord_inclusion(feasible_set, kappa, q, norm_tag, trials, rng))
    if check_support:
        reports.append(check_support_inequality(feasible_set, kappa, q, norm_tag, trials, rng))
    if not reports:
        raise PreconditionError("at least one of the two checks must be enabled")
    for report in reports:
        if not report.holds:
            logger.info("uniform convexity (%g, %g) fails on %r: margin %.3e", kappa, q, feasible_set, report.worst_margin)
            return report
    return WitnessReport(True, max(report.worst_margin for report in reports), trials)
