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
Named property suites behind ``oco-lab property-test``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Callable
from typing import Dict
from typing import List
from typing import NamedTuple
from typing import Optional

import numpy as np

from oco_lab.errors import PreconditionError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.sets import AxisEllipsoid
from oco_lab.geometry.sets import Box
from oco_lab.geometry.sets import EuclideanBall
from oco_lab.geometry.sets import LpBall
from oco_lab.geometry.sets import Simplex
from oco_lab.geometry.uniform_convexity import check_chord_inclusion
from oco_lab.geometry.uniform_convexity import check_support_inequality
from oco_lab.geometry.uniform_convexity import sample_mixed
from oco_lab.geometry.uniform_convexity import uniform_convexity_witness

logger = logging.getLogger(__name__)

PROJECTION_TOLERANCE = 1e-7
LMO_TOLERANCE = 1e-9
OPTIMALITY_SAMPLES = 64
GRID_SIZE = 4096


class CaseResult(NamedTuple):
    """One checked case; worst_margin > 0 means a violation of that size."""

    case: str
    holds: bool
    worst_margin: float
    trials: int
    counterexample: Optional[Dict[str, Any]] = None


@dataclass
class SuiteReport:
    """Cases of one suite. A suite that expects a violation passes when some case fails."""

    suite: str
    cases: List[CaseResult] = field(default_factory=list)
    expect_violation: bool = False

    @property
    def passed(self) -> bool:
        all_hold = all(case.holds for case in self.cases)
        return not all_hold if self.expect_violation else all_hold

    def first_counterexample(self) -> Optional[CaseResult]:
        for case in self.cases:
            if not case.holds:
                return case
        return None


def _uniform_convexity_suite(trials: int, rng: np.random.Generator) -> SuiteReport:
    report = SuiteReport("uniform-convexity")
    definition_sets = [LpBall(2.0), LpBall(3.0)]
    for lp_ball in definition_sets:
        label = lp_ball.uniform_convexity
        result = check_chord_inclusion(lp_ball, label.kappa, label.q, label.norm_tag, trials, rng)
        report.cases.append(CaseResult(f"definition {lp_ball!r}", *_fields(result)))
    ball = EuclideanBall(1.0, dim=2)
    result = check_chord_inclusion(ball, 1.0, 2.0, "l2", trials, rng)
    report.cases.append(CaseResult(f"definition {ball!r}", *_fields(result)))

    for p in (2.0, 3.0, 4.0):
        lp_ball = LpBall(p)
        label = lp_ball.uniform_convexity
        result = check_support_inequality(lp_ball, label.kappa, label.q, label.norm_tag, trials, rng)
        report.cases.append(CaseResult(f"support {lp_ball!r}", *_fields(result)))
    return report


def _box_counterexample(trials: int, rng: np.random.Generator) -> SuiteReport:
    box = Box([-1.0, -1.0], [1.0, 1.0])
    result = uniform_convexity_witness(box, 0.1, 2.0, "l2", trials, rng)
    return SuiteReport("box-counterexample", [CaseResult(f"(0.1, 2) on {box!r}", *_fields(result))], True)


def _fields(result):
    return result.holds, result.worst_margin, result.trials, result.counterexample


def projection_sets() -> List[FeasibleSet]:
    """One instance of every set kind, plus higher-dimensional variants."""
    return [
        EuclideanBall(1.0, dim=2),
        EuclideanBall(2.0, center=[0.5, -1.0, 0.0]),
        AxisEllipsoid.w_lambda(0.5),
        AxisEllipsoid([1.0, 0.5, 0.25]),
        LpBall(1.0),
        LpBall(2.0, dim=3),
        LpBall(3.0),
        LpBall(4.0),
        Box([-1.0, -1.0], [1.0, 1.0]),
        Box([0.0, -2.0, 1.0], [1.0, 2.0, 3.0]),
        Simplex(1.0, dim=3),
    ]


def check_projection(feasible_set: FeasibleSet, trials: int, rng: np.random.Generator) -> CaseResult:
    """
    Projections of random points must land in K, be fixed points of the projection, and satisfy
    <z - x, y - x> <= 0 for sampled y in K.
    """
    samples = sample_mixed(feasible_set, rng, OPTIMALITY_SAMPLES)
    spread = 3.0 * feasible_set.max_norm()
    worst = -np.inf
    counterexample = None
    for _ in range(trials):
        z = feasible_set.center() + spread * rng.standard_normal(feasible_set.dim)
        x = feasible_set.project(z)
        scale = 1.0 + float(np.linalg.norm(z - x)) * feasible_set.diameter()
        margins = [
            feasible_set.violation(x),
            float(np.linalg.norm(feasible_set.project(x) - x)),
            float(np.max((samples - x) @ (z - x))) / scale,
        ]
        margin = max(margins)
        if margin > worst:
            worst = margin
            if margin > PROJECTION_TOLERANCE:
                counterexample = {"z": z, "projection": x, "margins": margins}
    return CaseResult(f"projection {feasible_set!r}", worst <= PROJECTION_TOLERANCE, float(worst), trials, counterexample)


def _boundary_grid(feasible_set: FeasibleSet, rng: np.random.Generator) -> np.ndarray:
    if feasible_set.dim == 2:
        angles = np.linspace(0.0, 2.0 * np.pi, GRID_SIZE, endpoint=False)
        return feasible_set.boundary_point(np.column_stack([np.cos(angles), np.sin(angles)]))
    return feasible_set.sample_boundary(rng, GRID_SIZE)


def check_linear_minimizer(feasible_set: FeasibleSet, trials: int, rng: np.random.Generator) -> CaseResult:
    """The linear minimizer must be in K and beat every point of a boundary grid."""
    grid = _boundary_grid(feasible_set, rng)
    worst = -np.inf
    counterexample = None
    for _ in range(trials):
        theta = rng.standard_normal(feasible_set.dim)
        x = feasible_set.linear_minimizer(theta)
        scale = 1.0 + float(np.linalg.norm(theta)) * feasible_set.max_norm()
        margin = max(feasible_set.violation(x), (float(theta @ x) - float(np.min(grid @ theta))) / scale)
        if margin > worst:
            worst = margin
            if margin > LMO_TOLERANCE:
                counterexample = {"theta": theta, "minimizer": x}
    return CaseResult(f"linear minimizer {feasible_set!r}", worst <= LMO_TOLERANCE, float(worst), trials, counterexample)


def _projection(trials: int, rng: np.random.Generator) -> SuiteReport:
    return SuiteReport("projection", [check_projection(k, trials, rng) for k in projection_sets()])


def _linear_minimizer(trials: int, rng: np.random.Generator) -> SuiteReport:
    sets = [k for k in projection_sets() if k.dim == 2] + [Simplex(1.0, dim=3)]
    return SuiteReport("linear-minimizer", [check_linear_minimizer(k, trials, rng) for k in sets])


SUITES: Dict[str, Callable[[int, np.random.Generator], SuiteReport]] = {
    "uniform-convexity": _uniform_convexity_suite,
    "box-counterexample": _box_counterexample,
    "projection": _projection,
    "linear-minimizer": _linear_minimizer,
}


def run_suite(name: str, trials: int = 1000, seed: int = 0) -> SuiteReport:
    """Run a named suite with its own generator."""
    suite = SUITES.get(name)
    if suite is None:
        raise PreconditionError(f"unknown property suite {name!r}; expected one of {sorted(SUITES)}")
    if trials < 1:
        raise PreconditionError(f"trials must be at least 1, got {trials}")
    report = suite(trials, np.random.default_rng(seed))
    logger.info("suite %s: %s", name, "passed" if report.passed else "FAILED")
    return report
