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
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from oco_lab.environments.adversarial import AlternatingAdversary
from oco_lab.environments.diagnostics import corruption_budget_used
from oco_lab.environments.diagnostics import growth_margin
from oco_lab.environments.diagnostics import optimal_point
from oco_lab.environments.environment import NoiseSpec
from oco_lab.environments.environment import Round
from oco_lab.environments.growth import BetaBernoulliGrowth
from oco_lab.environments.growth import CorruptedGrowth
from oco_lab.environments.stochastic import StochasticLinear
from oco_lab.environments.stochastic import StochasticQuadratic
from oco_lab.environments.stochastic import StochasticSquaredLinear
from oco_lab.errors import ConfigError
from oco_lab.errors import CorruptionBudgetExceeded
from oco_lab.errors import PreconditionError
from oco_lab.geometry.sets import AxisEllipsoid
from oco_lab.geometry.sets import Box
from oco_lab.geometry.sets import EuclideanBall
from oco_lab.losses.loss_functions import Linear
from oco_lab.losses.loss_functions import Quadratic


def _trace(env, feasible_set, seed, horizon):
    rng = np.random.default_rng(seed)
    env.start_run(rng, horizon)
    x = feasible_set.center()
    return [env.sample_round(rng, t, x) for t in range(1, horizon + 1)]


class TestBetaBernoulliGrowth:
    def test_losses_take_two_values(self):
        env = BetaBernoulliGrowth(level=0.1)
        rounds = _trace(env, AxisEllipsoid.w_lambda(0.5), 0, 200)
        for played in rounds:
            assert isinstance(played.loss, Linear)
            assert played.loss.g[1] == -0.1
            assert played.loss.g[0] in (-1.0, 1.0)

    def test_mean_function(self):
        mean = BetaBernoulliGrowth(level=0.1).mean_function()
        assert isinstance(mean, Linear)
        assert_allclose(mean.g, [0.0, -0.1])

    def test_run_mean_is_conditional_on_the_drawn_probability(self):
        env = BetaBernoulliGrowth(level=0.1)
        with pytest.raises(PreconditionError):
            env.run_mean_function()
        env.start_run(np.random.default_rng(5), 16)
        assert_allclose(env.run_mean_function().g, [2.0 * env.success_probability - 1.0, -0.1])
        assert_allclose(env.mean_function().g, [0.0, -0.1])

    def test_run_mean_matches_draws_within_a_run(self):
        env = BetaBernoulliGrowth(level=0.1)
        rounds = _trace(env, AxisEllipsoid.w_lambda(0.5), 3, 20_000)
        first = np.array([played.loss.g[0] for played in rounds])
        assert abs(first.mean() - env.run_mean_function().g[0]) <= 4.0 / math.sqrt(first.size)

    def test_run_optimum_follows_the_drawn_probability(self):
        env = BetaBernoulliGrowth(level=0.1)
        ellipse = AxisEllipsoid.w_lambda(0.5)
        env.start_run(np.random.default_rng(5), 16)
        optimum = optimal_point(env, ellipse, env.run_mean_function())
        assert_allclose(optimum.x_star, ellipse.linear_minimizer(env.run_mean_function().g))
        assert_allclose(optimal_point(env, ellipse).x_star, [0.0, 0.5])

    def test_mean_matches_draws_across_runs(self):
        env = BetaBernoulliGrowth(level=0.1)
        rng = np.random.default_rng(11)
        runs = 20_000
        first = np.empty(runs)
        for i in range(runs):
            env.start_run(rng, 1)
            first[i] = env.sample_round(rng, 1, [0.0, 0.0]).loss.g[0]
        assert abs(first.mean()) <= 4.0 * first.std(ddof=1) / math.sqrt(runs)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_growth_margin_nonnegative(self, seed):
        env = BetaBernoulliGrowth(level=0.1)
        rounds = _trace(env, AxisEllipsoid.w_lambda(0.5), seed, 500)
        assert growth_margin([played.loss.g for played in rounds], 0.1) >= 0.0

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**32 - 1), level=st.floats(min_value=0.01, max_value=0.9))
    def test_growth_holds_for_any_seed_and_level(self, seed, level):
        rounds = _trace(BetaBernoulliGrowth(level=level), AxisEllipsoid.w_lambda(0.5), seed, 300)
        assert growth_margin([played.loss.g for played in rounds], level) >= 0.0

    def test_same_seed_same_sequence(self):
        ellipse = AxisEllipsoid.w_lambda(0.5)
        first = [played.loss.g for played in _trace(BetaBernoulliGrowth(0.1), ellipse, 7, 100)]
        second = [played.loss.g for played in _trace(BetaBernoulliGrowth(0.1), ellipse, 7, 100)]
        assert np.array_equal(np.array(first), np.array(second))

    def test_second_moment(self):
        env = BetaBernoulliGrowth(level=0.1)
        assert env.second_moment([0.5, 2.0]) == pytest.approx(0.25 + 0.04)

    def test_gradient_bound(self):
        assert BetaBernoulliGrowth(0.1).gradient_bound(EuclideanBall()) == pytest.approx(math.sqrt(1.01))

    def test_rejects_bad_level(self):
        with pytest.raises(ConfigError):
            BetaBernoulliGrowth(level=0.0)

    def test_must_start_before_sampling(self):
        with pytest.raises(PreconditionError):
            BetaBernoulliGrowth().sample_round(np.random.default_rng(0), 1, [0.0, 0.0])


class TestCorruptedGrowth:
    def test_construction_constants(self):
        env = CorruptedGrowth(level=0.1, lam=0.5, budget=40.0)
        assert env.corrupted_rounds == 800
        assert env.corrupted_level == pytest.approx(0.0707107, abs=1e-6)
        assert env.projected_corruption() == pytest.approx(11.716, abs=1e-3)
        assert env.minimum_horizon == pytest.approx(16000.0)

    def test_budget_below_threshold_names_the_condition(self):
        with pytest.raises(ConfigError, match=r"C >= 1/\(lambda\*L\)"):
            CorruptedGrowth(level=0.1, lam=0.5, budget=10.0)

    def test_short_horizon_rejected(self):
        env = CorruptedGrowth(level=0.1, lam=0.5, budget=40.0)
        with pytest.raises(ConfigError):
            env.start_run(np.random.default_rng(0), 1000)

    def test_requires_matching_ellipse(self):
        env = CorruptedGrowth(level=0.1, lam=0.5, budget=40.0)
        env.check_feasible_set(AxisEllipsoid.w_lambda(0.5))
        with pytest.raises(ConfigError):
            env.check_feasible_set(EuclideanBall())
        with pytest.raises(ConfigError):
            env.check_feasible_set(AxisEllipsoid.w_lambda(0.25))

    def test_corruption_spent_along_a_run(self):
        env = CorruptedGrowth(level=0.5, lam=0.5, budget=16.0)
        assert env.corrupted_rounds == 64
        assert env.minimum_horizon == pytest.approx(256.0)
        ellipse = AxisEllipsoid.w_lambda(0.5)
        rounds = _trace(env, ellipse, 3, 256)

        corrupted = [played for played in rounds if played.loss is not played.clean_loss]
        assert len(corrupted) == 64
        for played in corrupted:
            assert played.loss.g[0] == played.clean_loss.g[0]
            assert played.loss.g[1] == pytest.approx(-0.25)
        assert corruption_budget_used(rounds, ellipse, budget=16.0) == pytest.approx(8.0)
        assert env.corruption_used == pytest.approx(8.0)

    def test_clean_mean_is_the_growth_mean(self):
        assert_allclose(CorruptedGrowth(0.1, 0.5, 40.0).mean_function().g, [0.0, -0.1])
        assert CorruptedGrowth(0.1, 0.5, 40.0).corruption_budget() == 40.0


class TestDiagnostics:
    def test_growth_margin_single_round(self):
        assert growth_margin([[1.0, -0.1]], 0.1) == pytest.approx(math.sqrt(1.01) - 0.1)

    def test_growth_margin_equality_case(self):
        assert growth_margin([[1.0, -0.1], [-1.0, -0.1]], 0.1) == 0.0

    def test_growth_margin_needs_a_trace(self):
        with pytest.raises(PreconditionError):
            growth_margin(np.zeros((0, 2)), 0.1)

    def test_optimal_point_linear_mean_on_ellipse(self):
        optimum = optimal_point(StochasticLinear([0.0, -0.1]), AxisEllipsoid.w_lambda(0.5))
        assert_allclose(optimum.x_star, [0.0, 0.5], atol=1e-12)
        assert_allclose(optimum.grad, [0.0, -0.1])

    def test_optimal_point_quadratic_mean(self):
        optimum = optimal_point(StochasticQuadratic([0.0, 2.0], alpha=1.0), EuclideanBall())
        assert_allclose(optimum.x_star, [0.0, 1.0], atol=1e-12)
        assert_allclose(optimum.grad, [0.0, -1.0], atol=1e-12)

    def test_optimal_point_facet_tie_break(self):
        optimum = optimal_point(StochasticLinear([0.0, -0.1]), Box([-1.0, -1.0], [1.0, 1.0]))
        assert_allclose(optimum.x_star, [0.0, 1.0])

    def test_optimal_point_needs_a_mean(self):
        with pytest.raises(PreconditionError):
            optimal_point(AlternatingAdversary(), Box([-1.0], [1.0]))

    def test_corruption_zero_without_corrupted_rounds(self):
        loss = Linear([1.0, -0.1])
        assert corruption_budget_used([Round(loss, loss)] * 5, AxisEllipsoid.w_lambda(0.5)) == 0.0

    def test_corruption_overflow(self):
        rounds = [Round(Linear([1.0, -0.5]), Linear([1.0, -0.1]))] * 3
        with pytest.raises(CorruptionBudgetExceeded):
            corruption_budget_used(rounds, AxisEllipsoid.w_lambda(0.5), budget=0.5)

    def test_corruption_needs_clean_losses(self):
        with pytest.raises(PreconditionError):
            corruption_budget_used([Round(Linear([1.0]), None)], Box([-1.0], [1.0]))


class TestStochasticKinds:
    def test_noise_spec_validation(self):
        with pytest.raises(ConfigError):
            NoiseSpec("gaussian", 1.0)
        with pytest.raises(ConfigError):
            NoiseSpec("uniform", -1.0)

    def test_linear_noise_is_bounded(self):
        env = StochasticLinear([0.0, -0.1], NoiseSpec("rademacher", 1.0, (0,)))
        ball = EuclideanBall()
        rounds = _trace(env, ball, 0, 100)
        bound = env.gradient_bound(ball)
        assert bound == pytest.approx(math.sqrt(1.01))
        assert all(np.linalg.norm(played.loss.g) <= bound + 1e-12 for played in rounds)
        assert all(played.loss.g[1] == -0.1 for played in rounds)

    def test_linear_second_moment(self):
        env = StochasticLinear([0.0, -0.1], NoiseSpec("uniform", 0.3))
        expected = 0.01 * 4.0 + 0.03 * (1.0 + 4.0)
        assert env.second_moment([1.0, -2.0]) == pytest.approx(expected)

    def test_quadratic_mean_function(self):
        mean = StochasticQuadratic([0.0, 2.0], alpha=1.0).mean_function()
        assert isinstance(mean, Quadratic)
        assert_allclose(mean.theta, [0.0, 2.0])
        assert mean.alpha == 1.0

    def test_squared_linear_mean_adds_noise_variance(self):
        env = StochasticSquaredLinear([1.0, 0.0], b=0.5, noise=NoiseSpec("uniform", 0.3))
        mean = env.mean_function()
        assert_allclose(mean.quad, [[1.03, 0.0], [0.0, 0.03]])
        assert mean.value([0.5, 0.0]) == pytest.approx(1.03 * 0.25 - 0.5 + 0.25)

    def test_noise_coordinate_out_of_range(self):
        with pytest.raises(ConfigError):
            StochasticLinear([0.0, 1.0], NoiseSpec("uniform", 1.0, (5,)))


class TestAlternatingAdversary:
    def test_pattern(self):
        env = AlternatingAdversary()
        rounds = _trace(env, Box([-1.0], [1.0]), 0, 5)
        assert [float(played.loss.g[0]) for played in rounds] == [-0.5, 1.0, -1.0, 1.0, -1.0]
        assert all(played.clean_loss is None for played in rounds)

    def test_has_no_mean(self):
        assert AlternatingAdversary().mean_function() is None
        assert AlternatingAdversary().gradient_bound(Box([-1.0], [1.0])) == 1.0


def test_run_mean_defaults_to_the_mean():
    env = StochasticLinear([0.0, -0.1])
    env.start_run(np.random.default_rng(0), 8)
    assert_allclose(env.run_mean_function().g, env.mean_function().g)
    assert AlternatingAdversary().run_mean_function() is None
