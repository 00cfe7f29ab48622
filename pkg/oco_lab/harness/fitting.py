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
import logging
from typing import NamedTuple

import numpy as np
from scipy import stats

from oco_lab.errors import PreconditionError

logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 4


class GrowthFit(NamedTuple):
    """log R_T = slope * log T + intercept, fitted on `points` horizons."""

    slope: float
    intercept: float
    r_squared: float
    points: int


def fit_growth_exponent(horizons, values) -> GrowthFit:
    """
    Ordinary least squares of log(value) against log(T). Nonpositive or non-finite values are dropped;
    fewer than four remaining points is an error.
    """
    horizons = np.asarray(horizons, dtype=float)
    values = np.asarray(values, dtype=float)
    if horizons.shape != values.shape or horizons.ndim != 1:
        raise PreconditionError(f"horizons and values must be matching 1-D arrays, got {horizons.shape}, {values.shape}")
    keep = np.isfinite(values) & (values > 0.0) & (horizons > 0.0)
    if not np.all(keep):
        logger.info("dropping %d nonpositive regret values before the fit", int(np.sum(~keep)))
    if int(np.sum(keep)) < MIN_FIT_POINTS:
        raise PreconditionError(f"a growth fit needs at least {MIN_FIT_POINTS} positive points, got {int(np.sum(keep))}")
    result = stats.linregress(np.log(horizons[keep]), np.log(values[keep]))
    return GrowthFit(float(result.slope), float(result.intercept), float(result.rvalue**2), int(np.sum(keep)))
