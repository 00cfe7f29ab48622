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
import numpy as np
import pytest

from oco_lab.errors import PreconditionError
from oco_lab.geometry.sets import Box
from oco_lab.geometry.sets import EuclideanBall
from oco_lab.geometry.sets import LpBall
from oco_lab.geometry.uniform_convexity import check_support_inequality
from oco_lab.geometry.uniform_convexity import sample_mixed
from oco_lab.geometry.uniform_convexity import uniform_convexity_witness


class TestWitness:
    def test_unit_ball_is_strongly_convex(self):
        report = uniform_convexity_witness(EuclideanBall(), 1.0, 2.0, trials=500)
        assert report.holds
        assert report.counterexample is None
        assert report.trials == 500

    @pytest.mark.parametrize("p", [2.0, 3.0])
    def test_lp_ball_labels_hold(self, p):
        lp_ball = LpBall(p)
        label = lp_ball.uniform_convexity
        assert uniform_convexity_witness(lp_ball, label.kappa, label.q, label.norm_tag, trials=500).holds

    @pytest.mark.parametrize("p", [2.0, 3.0, 4.0])
    def test_support_inequality_on_lp_balls(self, p):
        lp_ball = LpBall(p)
        report = check_support_inequality(lp_ball, 1.0 / p, p, "lp", 500, np.random.default_rng(int(p)))
        assert report.holds

    def test_box_has_a_counterexample(self):
        report = uniform_convexity_witness(Box([-1.0, -1.0], [1.0, 1.0]), 0.1, 2.0, trials=1000)
        assert not report.holds
        assert report.worst_margin > 1e-9
        assert report.counterexample is not None

    def test_deterministic_for_a_seed(self):
        first = uniform_convexity_witness(LpBall(3.0), 1 / 3, 3.0, "lp", 200, np.random.default_rng(5))
        second = uniform_convexity_witness(LpBall(3.0), 1 / 3, 3.0, "lp", 200, np.random.default_rng(5))
        assert first.worst_margin == second.worst_margin


class TestPreconditions:
    def test_trials_positive(self):
        with pytest.raises(PreconditionError):
            uniform_convexity_witness(EuclideanBall(), 1.0, 2.0, trials=0)

    def test_q_at_least_two(self):
        with pytest.raises(PreconditionError):
            uniform_convexity_witness(EuclideanBall(), 1.0, 1.5)

    def test_norm_tag_supported(self):
        with pytest.raises(PreconditionError):
            uniform_convexity_witness(EuclideanBall(), 1.0, 2.0, "lp")


def test_mixed_samples_are_members():
    lp_ball = LpBall(4.0)
    points = sample_mixed(lp_ball, np.random.default_rng(2), 200)
    assert points.shape == (200, 2)
    assert all(lp_ball.contains(point) for point in points)
