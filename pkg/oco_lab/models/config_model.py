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

from enum import Enum
from typing import Any
from typing import Dict
from typing import List
from typing import Optional

from pydantic import BaseModel
from pydantic import ConfigDict
from pydantic import Field
from pydantic import field_validator
from pydantic import model_validator

# pylint: disable=no-self-argument


class SetKind(str, Enum):
    """Feasible-set kinds accepted in experiment files"""

    EUCLIDEAN_BALL = "euclidean_ball"
    AXIS_ELLIPSOID = "axis_ellipsoid"
    ELLIPSE_W = "ellipse_w"
    LP_BALL = "lp_ball"
    BOX = "box"
    SIMPLEX = "simplex"


class EnvKind(str, Enum):
    """Environment kinds accepted in experiment files"""

    STOCHASTIC_LINEAR = "stochastic_linear"
    STOCHASTIC_QUADRATIC = "stochastic_quadratic"
    STOCHASTIC_SQUARED_LINEAR = "stochastic_squared_linear"
    BETA_BERNOULLI_GROWTH = "beta_bernoulli_growth"
    CORRUPTED_GROWTH = "corrupted_growth"
    ALTERNATING_ADVERSARY = "alternating_adversary"


class LearnerKind(str, Enum):
    """Learner kinds accepted in experiment files"""

    OGD = "ogd"
    FTL = "ftl"
    ONS = "ons"
    UNIVERSAL = "universal"
    ORACLE = "oracle"


class StrictModel(BaseModel):
    """Base for every schema model: unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid")


# ---------- per-kind parameter schemas ----------
class EuclideanBallParams(StrictModel):
    radius: float = Field(1.0, gt=0.0, description="Ball radius")
    center: Optional[List[float]] = Field(None, description="Ball center (origin by default)")
    dim: Optional[int] = Field(None, ge=1, description="Dimension when no center is given (2 by default)")


class AxisEllipsoidParams(StrictModel):
    semi_axes: List[float] = Field(..., min_length=1, description="Positive semi-axis lengths")


class EllipseParams(StrictModel):
    lam: float = Field(..., gt=0.0, le=1.0, description="Minor semi-axis of the ellipse with semi-axes (1, lam)")


class LpBallParams(StrictModel):
    p: float = Field(..., ge=1.0, description="Norm exponent")
    radius: float = Field(1.0, gt=0.0)
    dim: int = Field(2, ge=1)


class BoxParams(StrictModel):
    lo: List[float] = Field(..., min_length=1)
    hi: List[float] = Field(..., min_length=1)


class SimplexParams(StrictModel):
    scale: float = Field(1.0, gt=0.0)
    dim: int = Field(3, ge=2)


class NoiseParams(StrictModel):
    kind: str = Field("none", description="none, rademacher or uniform")
    amplitude: float = Field(0.0, ge=0.0)
    coords: Optional[List[int]] = Field(None, description="Perturbed coordinates (all by default)")


class StochasticLinearParams(StrictModel):
    mean: List[float] = Field(..., min_length=1, description="Mean gradient g°")
    noise: NoiseParams = Field(default_factory=NoiseParams)


class StochasticQuadraticParams(StrictModel):
    theta_mean: List[float] = Field(..., min_length=1)
    alpha: float = Field(1.0, gt=0.0)
    noise: NoiseParams = Field(default_factory=NoiseParams)


class StochasticSquaredLinearParams(StrictModel):
    a_mean: List[float] = Field(..., min_length=1)
    b: float = 0.0
    noise: NoiseParams = Field(default_factory=NoiseParams)


class GrowthParams(StrictModel):
    level: float = Field(0.1, gt=0.0, lt=1.0, description="Growth rate L")
    k: float = Field(1.0, gt=0.0, description="Beta(k, k) shape")


class CorruptedGrowthParams(GrowthParams):
    lam: float = Field(0.5, gt=0.0, le=1.0, description="Ellipse parameter; the set must be W_lam")
    budget: float = Field(40.0, gt=0.0, description="Corruption budget C")


class AlternatingParams(StrictModel):
    first: float = -0.5
    amplitude: float = Field(1.0, gt=0.0)


class OgdParams(StrictModel):
    schedule: str = Field("general", description="general, strongly_convex or constant")
    alpha: Optional[float] = Field(None, gt=0.0)
    eta: Optional[float] = Field(None, gt=0.0)
    gradient_bound: Optional[float] = Field(None, gt=0.0, description="G (environment bound by default)")


class OnsParams(StrictModel):
    gamma: Optional[float] = Field(None, gt=0.0)
    epsilon: float = Field(1.0, gt=0.0)
    gradient_bound: Optional[float] = Field(None, gt=0.0)


class GradientBoundParams(StrictModel):
    gradient_bound: Optional[float] = Field(None, gt=0.0)


class OracleParams(StrictModel):
    """The oracle plays the optimum of the mean loss and takes no parameters."""


# ---------- experiment files ----------
class ComponentSpec(StrictModel):
    """A kind plus its parameters, validated later against the kind's parameter schema"""

    kind: str = Field(..., description="Component kind")
    params: Dict[str, Any] = Field(default_factory=dict, description="Kind-specific parameters")

    def label(self) -> str:
        """Stable short label used in CSV rows."""
        if not self.params:
            return self.kind
        parts = ",".join(f"{key}={self.params[key]}" for key in sorted(self.params))
        return f"{self.kind}({parts})"


class SeedSpec(StrictModel):
    count: int = Field(32, ge=1, description="Number of Monte-Carlo seeds M")
    base: int = Field(0, ge=0, description="seed_i = base + i")


class OutSpec(StrictModel):
    dir: str = Field("out", description="Output directory (created if missing)")


def check_horizons(horizons: List[int]) -> List[int]:
    """Every horizon at least 2, strictly increasing."""
    if any(h < 2 for h in horizons):
        raise ValueError("every horizon must be at least 2")
    if any(b <= a for a, b in zip(horizons, horizons[1:])):
        raise ValueError("horizons must be strictly increasing")
    return horizons


def dyadic_checkpoints(horizons: List[int]) -> List[int]:
    """Powers of two up to the largest horizon."""
    largest = max(horizons)
    points = []
    step = 1
    while step <= largest:
        points.append(step)
        step *= 2
    return points


def is_dyadic(t: int) -> bool:
    """t is a power of two"""
    return t >= 1 and t & (t - 1) == 0


class ExperimentConfig(StrictModel):
    """Everything the harness needs for one experiment"""

    set_spec: ComponentSpec
    env_spec: ComponentSpec
    learner_spec: ComponentSpec
    horizons: List[int] = Field(..., min_length=1)
    seed_count: int = Field(1, ge=1)
    seed_base: int = Field(0, ge=0)
    checkpoints: List[int] = Field(default_factory=list)
    out_dir: Optional[str] = None

    @field_validator("horizons")
    def validate_horizons(cls, v):
        """Horizons must be increasing and at least 2"""
        return check_horizons(v)

    @model_validator(mode="after")
    def fill_checkpoints(self):
        """Default to dyadic checkpoints; explicit ones must be powers of two inside [1, max T]"""
        if not self.checkpoints:
            self.checkpoints = dyadic_checkpoints(self.horizons)
        largest = max(self.horizons)
        if any(c < 1 or c > largest for c in self.checkpoints):
            raise ValueError(f"checkpoints must lie in [1, {largest}]")
        off_grid = [c for c in self.checkpoints if not is_dyadic(c)]
        if off_grid:
            raise ValueError(f"checkpoints must be powers of two, got {off_grid}")
        self.checkpoints = sorted(set(self.checkpoints))
        return self

    def seeds(self) -> List[int]:
        """seed_i = base + i"""
        return [self.seed_base + i for i in range(self.seed_count)]


class CliConfig(StrictModel):
    """
    Experiment file accepted by ``oco-lab run``:
    {"set": {...}, "env": {...}, "learner": {...}, "horizons": [...], "seeds": {...}, "out": {...}}
    """

    set: ComponentSpec
    env: ComponentSpec
    learner: ComponentSpec
    horizons: List[int] = Field(..., min_length=1)
    seeds: SeedSpec = Field(default_factory=SeedSpec)
    out: OutSpec = Field(default_factory=OutSpec)

    @field_validator("horizons")
    def validate_horizons(cls, v):
        """Horizons must be increasing and at least 2"""
        return check_horizons(v)

    def to_experiment_config(self) -> ExperimentConfig:
        """Harness view of this file, with dyadic checkpoints"""
        return ExperimentConfig(
            set_spec=self.set,
            env_spec=self.env,
            learner_spec=self.learner,
            horizons=self.horizons,
            seed_count=self.seeds.count,
            seed_base=self.seeds.base,
            out_dir=self.out.dir,
        )
