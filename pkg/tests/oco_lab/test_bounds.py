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
import math

import numpy as np
import pytest

from oco_lab.environments.adversarial import AlternatingAdversary
from oco_lab.environments.growth import BetaBernoulliGrowth
from oco_lab.errors import PreconditionError
from oco_lab.geometry.sets import AxisEllipsoid
from oco_lab.geometry.sets import Box
from oco_lab.geometry.sets import EuclideanBall
from oco_lab.geometry.sets import LpBall
from oco_lab.harness.bounds import SPHERE_LOWER_BOUND
from oco_lab.harness.bounds import UNIFORM_CONVEXITY_LOWER_BOUND
from oco_lab.harness.bounds import bernstein_check
from oco_lab.harness.bounds import bernstein_constant
from oco_lab.harness.bounds import bound61_ratio
from oco_lab.harness.bounds import sphere_lower_bound_check
from oco_lab.harness.bounds import uniform_convexity_lower_bound_check


class TestBoundRatio:
    def test_comparator_every_round(self):
        points = np.tile([0.0, 0.5], (10, 1))
        gradients = np.tile([1.0, -0.1], (10, 1))
        assert bound61_ratio(points, gradients, [0.0, 0.5], 1.0, 2.0) == 0.0

    def test_single_round(self):
        ratio = bound61_ratio([[1.0, 0.0]], [[1.0, 0.0]], [0.0, 0.0], 1.0, 2.0, horizon=2)
        expected = 1.0 / (math.sqrt(math.log(2.0)) + 2.0 * math.log(2.0))
        assert ratio == pytest.approx(expected)
        assert ratio == pytest.approx(0.4507, abs=1e-4)

    def test_cauchy_schwarz_ceiling(self):
        rng = np.random.default_rng(0)
        ball = EuclideanBall()
        horizon = 500
        points = ball.sample_boundary(rng, horizon)
        gradients = points - ball.linear_minimizer([1.0, 0.0])
        gradients /= np.maximum(np.linalg.norm(gradients, axis=1), 1.0)[:, None]
        ratio = bound61_ratio(points, gradients, ball.linear_minimizer([1.0, 0.0]), 1.0, 2.0)
        assert 0.0 < ratio <= math.sqrt(horizon / math.log(horizon))

    def test_needs_two_rounds(self):
        with pytest.raises(PreconditionError):
            bound61_ratio([[1.0, 0.0]], [[1.0, 0.0]], [0.0, 0.0], 1.0, 2.0)

    def test_shapes_must_match(self):
        with pytest.raises(PreconditionError):
            bound61_ratio([[1.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0], 1.0, 2.0)


class TestBernstein:
    def test_constant(self):
        assert bernstein_constant(math.sqrt(1.01), 2.0, [0.0, -0.1]) == pytest.approx(40.4)
        with pytest.raises(PreconditionError):
            bernstein_constant(1.0, 2.0, [0.0, 0.0])

    def test_holds_with_the_sphere_constant(self):
        report = bernstein_check(BetaBernoulliGrowth(0.1), AxisEllipsoid.w_lambda(0.5), 40.4, 2000)
        assert report.holds
        assert report.samples == 2001
        assert report.worst_slack == pytest.approx(0.0, abs=1e-12)

    def test_fails_without_a_constant(self):
        report = bernstein_check(BetaBernoulliGrowth(0.1), AxisEllipsoid.w_lambda(0.5), 0.0, 200)
        assert not report.holds
        assert report.worst_slack < 0.0

    def test_needs_a_linear_mean(self):
        with pytest.raises(PreconditionError):
            bernstein_check(AlternatingAdversary(), Box([-1.0], [1.0]), 1.0, 10)


class TestCurvatureLowerBounds:
    def test_sphere_check(self):
        check = sphere_lower_bound_check(1.0, 10.0, 0.1, 100)
        assert check.name == SPHERE_LOWER_BOUND
        assert check.holds
        assert not sphere_lower_bound_check(0.5, 10.0, 0.1, 100).holds

    def test_uniform_convexity_check_on_the_ball(self):
        check = uniform_convexity_lower_bound_check(EuclideanBall(), [0.0, 2.0], 1.0, 2.0, 50)
        assert check.name == UNIFORM_CONVEXITY_LOWER_BOUND
        assert check.rhs == pytest.approx(0.25 * 2.0 * 2.0)
        assert check.holds

    def test_uniform_convexity_check_on_an_lp_ball(self):
        lp_ball = LpBall(4.0)
        check = uniform_convexity_lower_bound_check(lp_ball, [0.0, -1.0], 1.0, 4.0, 16)
        xi = 2.0**0.25
        assert check.rhs == pytest.approx(0.25 / (4.0 * xi**4) * 1.0 * 16.0**-1.0 * 16.0)

    def test_flat_sets_have_no_check(self):
        assert uniform_convexity_lower_bound_check(Box([-1.0, -1.0], [1.0, 1.0]), [0.0, 1.0], 1.0, 1.0, 10) is None
