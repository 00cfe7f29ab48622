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
import timeout_decorator

from oco_lab.errors import ConfigError
from oco_lab.harness.bounds import SPHERE_LOWER_BOUND
from oco_lab.harness.experiment import THREADS_ENV
from oco_lab.harness.experiment import resolve_threads
from oco_lab.harness.experiment import run_experiment
from oco_lab.harness.experiment import run_single
from oco_lab.harness.fitting import fit_growth_exponent
from oco_lab.harness.regret_curve import RegretCurve
from oco_lab.harness.regret_curve import RunSummary
from oco_lab.harness.regret_curve import standard_error
from oco_lab.models.config_model import ComponentSpec
from oco_lab.models.config_model import ExperimentConfig

ELLIPSE = ComponentSpec(kind="ellipse_w", params={"lam": 0.5})
GROWTH = ComponentSpec(kind="beta_bernoulli_growth", params={"level": 0.1})


def _config(learner="universal", env=GROWTH, feasible_set=ELLIPSE, horizons=(16, 32, 64, 128), seeds=2, **extra):
    return ExperimentConfig(
        set_spec=feasible_set,
        env_spec=env,
        learner_spec=ComponentSpec(kind=learner, params=extra),
        horizons=list(horizons),
        seed_count=seeds,
    )


class TestRunExperiment:
    def test_universal_on_the_growth_construction(self):
        result = run_experiment(_config(), threads=1)
        assert result.curve.horizons() == [16, 32, 64, 128]
        for point in result.curve.points:
            assert point.seeds == 2
            assert point.mean_pseudo_regret >= 0.0
            assert math.isfinite(point.bound61_ratio)
        for summary in result.summaries:
            assert summary.growth_margin >= 0.0
            assert summary.corruption_used is None
            assert SPHERE_LOWER_BOUND in [check.name for check in summary.curvature_checks]
        assert sorted(result.traces) == [0, 1]

    def test_trace_checkpoints(self):
        result = run_experiment(_config(seeds=1), threads=1)
        trace = result.traces[0]
        assert [point.t for point in trace] == [1, 2, 4, 8, 16, 32, 64, 128]
        last = trace[-1]
        assert last.cum_pseudo_regret == pytest.approx(result.curve.at(128).mean_pseudo_regret)
        assert all(point.dist_to_opt_sq >= 0.0 for point in trace)

    def test_oracle_has_zero_pseudo_regret(self):
        result = run_experiment(_config(learner="oracle"), threads=1)
        assert all(point.mean_pseudo_regret == 0.0 for point in result.curve.points)
        assert all(summary.bound61_ratio == pytest.approx(0.0, abs=1e-9) for summary in result.summaries)

    def test_same_seed_same_result(self):
        first = run_experiment(_config(learner="ogd", seeds=3), threads=1)
        second = run_experiment(_config(learner="ogd", seeds=3), threads=1)
        assert first.summaries == second.summaries
        assert first.traces == second.traces

    def test_ftl_against_the_alternating_pattern(self):
        config = _config(
            learner="ftl",
            env=ComponentSpec(kind="alternating_adversary"),
            feasible_set=ComponentSpec(kind="box", params={"lo": [-1.0], "hi": [1.0]}),
            horizons=(100, 200),
            seeds=1,
        )
        result = run_experiment(config, threads=1)
        for point in result.curve.points:
            assert point.mean_pseudo_regret is None
            assert point.mean_realized_regret >= 0.3 * point.horizon
        assert all(math.isnan(point.cum_pseudo_regret) for point in result.traces[0])

    def test_corrupted_run_spends_the_projected_budget(self):
        config = _config(
            env=ComponentSpec(kind="corrupted_growth", params={"level": 0.5, "lam": 0.5, "budget": 16.0}),
            horizons=(256,),
            seeds=1,
        )
        result = run_experiment(config, threads=1)
        assert result.summaries[0].corruption_used == pytest.approx(8.0)
        assert result.summaries[0].growth_margin >= 0.0

    def test_quadratic_environment_with_ons(self):
        config = _config(
            learner="ons",
            env=ComponentSpec(kind="stochastic_quadratic", params={"theta_mean": [0.0, 2.0]}),
            feasible_set=ComponentSpec(kind="euclidean_ball"),
            horizons=(8, 16),
            seeds=2,
        )
        result = run_experiment(config, threads=1)
        assert all(point.mean_pseudo_regret >= -1e-9 for point in result.curve.points)


class TestReducedScale:
    """Short-horizon versions of the long experiment files in tests/fixtures."""

    BOUND_RATIO_CEILING = 10.0

    @timeout_decorator.timeout(600)
    def test_universal_growth_pseudo_regret_is_far_from_linear(self):
        result = run_experiment(_config(horizons=(256, 512, 1024, 2048), seeds=4), threads=1)
        fit = fit_growth_exponent(result.curve.horizons(), result.curve.primary_means())
        assert fit.slope < 0.7
        assert all(summary.bound61_ratio <= self.BOUND_RATIO_CEILING for summary in result.summaries)

    @timeout_decorator.timeout(300)
    def test_universal_stays_within_the_square_root_bound_on_the_alternating_pattern(self):
        config = _config(
            env=ComponentSpec(kind="alternating_adversary"),
            feasible_set=ComponentSpec(kind="box", params={"lo": [-1.0], "hi": [1.0]}),
            horizons=(2000,),
            seeds=1,
        )
        result = run_experiment(config, threads=1)
        summary = result.summaries[0]
        assert summary.realized_regret <= 5.0 * math.sqrt(2000 * math.log(2000))
        assert summary.bound61_ratio <= self.BOUND_RATIO_CEILING

class TestValidation:
    def test_oracle_needs_a_mean(self):
        config = _config(
            learner="oracle",
            env=ComponentSpec(kind="alternating_adversary"),
            feasible_set=ComponentSpec(kind="box", params={"lo": [-1.0], "hi": [1.0]}),
        )
        with pytest.raises(ConfigError):
            run_experiment(config, threads=1)

    def test_corrupted_horizon_too_short(self):
        config = _config(env=ComponentSpec(kind="corrupted_growth", params={"level": 0.1, "lam": 0.5, "budget": 40.0}))
        with pytest.raises(ConfigError, match="T >= C"):
            run_experiment(config, threads=1)

    def test_corrupted_needs_its_ellipse(self):
        config = _config(
            env=ComponentSpec(kind="corrupted_growth", params={"level": 0.5, "lam": 0.5, "budget": 16.0}),
            feasible_set=ComponentSpec(kind="euclidean_ball"),
            horizons=(256,),
        )
        with pytest.raises(ConfigError):
            run_experiment(config, threads=1)

    def test_dimension_mismatch(self):
        config = _config(env=ComponentSpec(kind="stochastic_linear", params={"mean": [1.0, 0.0, 0.0]}))
        with pytest.raises(ConfigError):
            run_experiment(config, threads=1)

    def test_unknown_learner_params(self):
        with pytest.raises(ConfigError):
            run_experiment(_config(learner="universal", step=0.1), threads=1)


def test_single_run_is_deterministic():
    config = _config(learner="ftl")
    first, first_trace = run_single(config, 7, 64, checkpoints=(8, 64))
    second, second_trace = run_single(config, 7, 64, checkpoints=(8, 64))
    assert first == second
    assert first_trace == second_trace
    assert [point.t for point in first_trace] == [8, 64]


class TestThreads:
    def test_explicit(self):
        assert resolve_threads(3) == 3

    def test_environment_variable(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "2")
        assert resolve_threads() == 2

    def test_invalid(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "many")
        with pytest.raises(ConfigError):
            resolve_threads()
        with pytest.raises(ConfigError):
            resolve_threads(0)


class TestAggregation:
    def test_standard_error(self):
        assert standard_error([1.0]) == 0.0
        assert standard_error([1.0, 3.0]) == pytest.approx(np.std([1.0, 3.0], ddof=1) / math.sqrt(2.0))

    def test_curve_uses_realized_regret_without_a_mean(self):
        summaries = [
            RunSummary(0, 10, None, 2.0, 0.1),
            RunSummary(1, 10, None, 4.0, 0.3),
            RunSummary(0, 20, None, 5.0, 0.2),
        ]
        curve = RegretCurve.aggregate(summaries)
        assert curve.horizons() == [10, 20]
        first = curve.at(10)
        assert first.mean_pseudo_regret is None
        assert first.primary == pytest.approx(3.0)
        assert first.se == pytest.approx(1.0)
        assert first.bound61_ratio == 0.3
        assert curve.at(20).se == 0.0
        with pytest.raises(KeyError):
            curve.at(30)

    def test_curve_prefers_pseudo_regret(self):
        curve = RegretCurve.aggregate([RunSummary(0, 10, 1.0, 5.0, 0.1), RunSummary(1, 10, 3.0, 7.0, 0.1)])
        assert curve.primary_means() == [pytest.approx(2.0)]
        assert curve.at(10).mean_realized_regret == pytest.approx(6.0)
