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
import math
from dataclasses import dataclass
from dataclasses import field
from typing import Dict
from typing import List
from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from oco_lab.harness.bounds import CurvatureCheck

logger = logging.getLogger(__name__)

NONNEGATIVITY_STANDARD_ERRORS = 3.0


class TracePoint(NamedTuple):
    """Per-run state at one checkpoint; pseudo-regret is nan when the environment has no mean loss."""

    t: int
    cum_pseudo_regret: float
    cum_realized_regret: float
    dist_to_opt_sq: float


@dataclass(frozen=True)
class RunSummary:
    """Totals of one (seed, T) run."""

    seed: int
    horizon: int
    pseudo_regret: Optional[float]
    realized_regret: float
    bound61_ratio: float
    growth_margin: Optional[float] = None
    corruption_used: Optional[float] = None
    curvature_checks: Tuple[CurvatureCheck, ...] = ()

    @property
    def curvature_holds(self) -> bool:
        return all(check.holds for check in self.curvature_checks)


class CurvePoint(NamedTuple):
    """Across-seed aggregate at one horizon. se is the standard error of the primary metric."""

    horizon: int
    mean_pseudo_regret: Optional[float]
    se: float
    mean_realized_regret: float
    bound61_ratio: float
    seeds: int

    @property
    def primary(self) -> float:
        """Pseudo-regret when available, realized regret otherwise."""
        return self.mean_realized_regret if self.mean_pseudo_regret is None else self.mean_pseudo_regret


def standard_error(values: Sequence[float]) -> float:
    """std(ddof=1) / sqrt(M); 0 for a single seed."""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(values.size))


@dataclass
class RegretCurve:
    """Mean regret ± standard error per horizon, in increasing horizon order."""

    points: List[CurvePoint] = field(default_factory=list)

    @classmethod
    def aggregate(cls, summaries: Sequence[RunSummary]) -> "RegretCurve":
        """Reduce per-run summaries over seeds. The bound ratio column is the worst ratio over seeds."""
        by_horizon: Dict[int, List[RunSummary]] = {}
        for summary in summaries:
            by_horizon.setdefault(summary.horizon, []).append(summary)

        points = []
        for horizon in sorted(by_horizon):
            runs = by_horizon[horizon]
            realized = [run.realized_regret for run in runs]
            pseudo = [run.pseudo_regret for run in runs if run.pseudo_regret is not None]
            mean_pseudo = float(np.mean(pseudo)) if len(pseudo) == len(runs) else None
            se = standard_error(realized if mean_pseudo is None else pseudo)
            point = CurvePoint(
                horizon,
                mean_pseudo,
                se,
                float(np.mean(realized)),
                max(run.bound61_ratio for run in runs),
                len(runs),
            )
            if mean_pseudo is not None and mean_pseudo < -NONNEGATIVITY_STANDARD_ERRORS * se - 1e-9 * horizon:
                logger.warning(
                    "mean pseudo-regret %.6g at T=%d is below -%g standard errors (se %.3g)",
                    mean_pseudo, horizon, NONNEGATIVITY_STANDARD_ERRORS, se,
                )
            points.append(point)
        return cls(points)

    def horizons(self) -> List[int]:
        return [point.horizon for point in self.points]

    def primary_means(self) -> List[float]:
        return [point.primary for point in self.points]

    def at(self, horizon: int) -> CurvePoint:
        """The point for horizon T; KeyError when T is not on the curve."""
        for point in self.points:
            if point.horizon == horizon:
                return point
        raise KeyError(horizon)
