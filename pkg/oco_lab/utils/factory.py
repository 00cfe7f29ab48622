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
from typing import Any
from typing import Callable
from typing import Dict
from typing import Optional
from typing import Tuple
from typing import Type

from pydantic import ValidationError

from oco_lab.algorithms.fixed import FixedDecision
from oco_lab.algorithms.ftl import FollowTheLeader
from oco_lab.algorithms.learner import Learner
from oco_lab.algorithms.ogd import OnlineGradientDescent
from oco_lab.algorithms.ons import OnlineNewtonStep
from oco_lab.algorithms.universal import UniversalLearner
from oco_lab.environments.adversarial import AlternatingAdversary
from oco_lab.environments.environment import Environment
from oco_lab.environments.environment import NoiseSpec
from oco_lab.environments.growth import BetaBernoulliGrowth
from oco_lab.environments.growth import CorruptedGrowth
from oco_lab.environments.stochastic import StochasticLinear
from oco_lab.environments.stochastic import StochasticQuadratic
from oco_lab.environments.stochastic import StochasticSquaredLinear
from oco_lab.errors import ConfigError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.feasible_set import Vector
from oco_lab.geometry.sets import AxisEllipsoid
from oco_lab.geometry.sets import Box
from oco_lab.geometry.sets import EuclideanBall
from oco_lab.geometry.sets import LpBall
from oco_lab.geometry.sets import Simplex
from oco_lab.models.config_model import AlternatingParams
from oco_lab.models.config_model import AxisEllipsoidParams
from oco_lab.models.config_model import BoxParams
from oco_lab.models.config_model import ComponentSpec
from oco_lab.models.config_model import CorruptedGrowthParams
from oco_lab.models.config_model import EllipseParams
from oco_lab.models.config_model import EnvKind
from oco_lab.models.config_model import EuclideanBallParams
from oco_lab.models.config_model import GradientBoundParams
from oco_lab.models.config_model import GrowthParams
from oco_lab.models.config_model import LearnerKind
from oco_lab.models.config_model import LpBallParams
from oco_lab.models.config_model import NoiseParams
from oco_lab.models.config_model import OgdParams
from oco_lab.models.config_model import OnsParams
from oco_lab.models.config_model import OracleParams
from oco_lab.models.config_model import SetKind
from oco_lab.models.config_model import SimplexParams
from oco_lab.models.config_model import StochasticLinearParams
from oco_lab.models.config_model import StochasticQuadraticParams
from oco_lab.models.config_model import StochasticSquaredLinearParams
from oco_lab.models.config_model import StrictModel

logger = logging.getLogger(__name__)

Builder = Callable[..., Any]


def _noise(params: NoiseParams) -> NoiseSpec:
    coords = None if params.coords is None else tuple(params.coords)
    return NoiseSpec(params.kind, params.amplitude, coords)


class SpecFactory:
    """
    Registry turning validated ``ComponentSpec``s into sets, environments and learners.
    Every failure surfaces as ConfigError, naming the component and kind.
    """

    _sets: Dict[str, Tuple[Type[StrictModel], Builder]] = {
        SetKind.EUCLIDEAN_BALL.value: (EuclideanBallParams, lambda p: EuclideanBall(p.radius, p.center, p.dim)),
        SetKind.AXIS_ELLIPSOID.value: (AxisEllipsoidParams, lambda p: AxisEllipsoid(p.semi_axes)),
        SetKind.ELLIPSE_W.value: (EllipseParams, lambda p: AxisEllipsoid.w_lambda(p.lam)),
        SetKind.LP_BALL.value: (LpBallParams, lambda p: LpBall(p.p, p.radius, p.dim)),
        SetKind.BOX.value: (BoxParams, lambda p: Box(p.lo, p.hi)),
        SetKind.SIMPLEX.value: (SimplexParams, lambda p: Simplex(p.scale, p.dim)),
    }

    _environments: Dict[str, Tuple[Type[StrictModel], Builder]] = {
        EnvKind.STOCHASTIC_LINEAR.value: (
            StochasticLinearParams,
            lambda p: StochasticLinear(p.mean, _noise(p.noise)),
        ),
        EnvKind.STOCHASTIC_QUADRATIC.value: (
            StochasticQuadraticParams,
            lambda p: StochasticQuadratic(p.theta_mean, p.alpha, _noise(p.noise)),
        ),
        EnvKind.STOCHASTIC_SQUARED_LINEAR.value: (
            StochasticSquaredLinearParams,
            lambda p: StochasticSquaredLinear(p.a_mean, p.b, _noise(p.noise)),
        ),
        EnvKind.BETA_BERNOULLI_GROWTH.value: (GrowthParams, lambda p: BetaBernoulliGrowth(p.level, p.k)),
        EnvKind.CORRUPTED_GROWTH.value: (
            CorruptedGrowthParams,
            lambda p: CorruptedGrowth(p.level, p.lam, p.budget, p.k),
        ),
        EnvKind.ALTERNATING_ADVERSARY.value: (AlternatingParams, lambda p: AlternatingAdversary(p.first, p.amplitude)),
    }

    _learner_params: Dict[str, Type[StrictModel]] = {
        LearnerKind.OGD.value: OgdParams,
        LearnerKind.FTL.value: GradientBoundParams,
        LearnerKind.ONS.value: OnsParams,
        LearnerKind.UNIVERSAL.value: GradientBoundParams,
        LearnerKind.ORACLE.value: OracleParams,
    }

    @classmethod
    def _parse(cls, registry: Dict[str, Any], spec: ComponentSpec, what: str):
        entry = registry.get(spec.kind)
        if entry is None:
            raise ConfigError(f"unknown {what} kind {spec.kind!r}; expected one of {sorted(registry)}")
        model = entry[0] if isinstance(entry, tuple) else entry
        try:
            params = model.model_validate(spec.params)
        except ValidationError as exc:
            raise ConfigError(f"invalid params for {what} {spec.kind!r}: {exc}") from exc
        return params, entry

    @classmethod
    def build_set(cls, spec: ComponentSpec) -> FeasibleSet:
        """Feasible set described by spec"""
        params, (_, builder) = cls._parse(cls._sets, spec, "set")
        feasible_set = builder(params)
        logger.debug("built set %r", feasible_set)
        return feasible_set

    @classmethod
    def build_environment(cls, spec: ComponentSpec) -> Environment:
        """Fresh environment described by spec"""
        params, (_, builder) = cls._parse(cls._environments, spec, "environment")
        return builder(params)

    @classmethod
    def learner_gradient_bound(cls, spec: ComponentSpec) -> Optional[float]:
        """G given explicitly in the learner params, if any"""
        params, _ = cls._parse(cls._learner_params, spec, "learner")
        return getattr(params, "gradient_bound", None)

    # pylint: disable=too-many-arguments,too-many-positional-arguments
    @classmethod
    def build_learner(
        cls,
        spec: ComponentSpec,
        feasible_set: FeasibleSet,
        gradient_bound: float,
        horizon: int,
        optimum: Optional[Vector] = None,
    ) -> Learner:
        """Fresh learner for one run of the given horizon"""
        params, _ = cls._parse(cls._learner_params, spec, "learner")
        if spec.kind == LearnerKind.OGD.value:
            return OnlineGradientDescent(
                feasible_set, gradient_bound, horizon, schedule=params.schedule, alpha=params.alpha, eta=params.eta
            )
        if spec.kind == LearnerKind.FTL.value:
            return FollowTheLeader(feasible_set, gradient_bound, horizon)
        if spec.kind == LearnerKind.ONS.value:
            return OnlineNewtonStep(feasible_set, gradient_bound, horizon, gamma=params.gamma, epsilon=params.epsilon)
        if spec.kind == LearnerKind.UNIVERSAL.value:
            return UniversalLearner(feasible_set, gradient_bound, horizon)
        if optimum is None:
            raise ConfigError("the oracle learner needs an environment with a mean loss")
        return FixedDecision(feasible_set, optimum, gradient_bound, horizon)
