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
The protocol loop: predict, sample the round loss, suffer, update; repeated over horizons and seeds.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from dataclasses import field
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from oco_lab.environments.diagnostics import OptimalPoint
from oco_lab.environments.diagnostics import growth_margin
from oco_lab.environments.diagnostics import optimal_point
from oco_lab.errors import ConfigError
from oco_lab.errors import CorruptionBudgetExceeded
from oco_lab.errors import InfeasiblePrediction
from oco_lab.errors import PreconditionError
from oco_lab.geometry.feasible_set import FeasibleSet
from oco_lab.geometry.sphere_facing import gamma_star
from oco_lab.harness.accumulator import CumulativeLoss
from oco_lab.harness.bounds import CurvatureCheck
from oco_lab.harness.bounds import bound61_ratio_from_sums
from oco_lab.harness.bounds import sphere_lower_bound_check
from oco_lab.harness.bounds import uniform_convexity_lower_bound_check
from oco_lab.harness.regret_curve import RegretCurve
from oco_lab.harness.regret_curve import RunSummary
from oco_lab.harness.regret_curve import TracePoint
from oco_lab.models.config_model import ExperimentConfig
from oco_lab.models.config_model import LearnerKind
from oco_lab.utils.factory import SpecFactory

logger = logging.getLogger(__name__)

THREADS_ENV = "OCO_LAB_THREADS"


@dataclass
class SeedResult:
    """Everything one seed produced: a summary per horizon and the checkpoint trace of the largest one."""

    seed: int
    summaries: List[RunSummary]
    trace: List[TracePoint]


@dataclass
class ExperimentResult:
    """Aggregated curve plus the per-run data it was reduced from, in seed order."""

    config: ExperimentConfig
    curve: RegretCurve
    summaries: List[RunSummary] = field(default_factory=list)
    traces: Dict[int, List[TracePoint]] = field(default_factory=dict)


class _RunningSums:
    """Sums over rounds that let any comparator c be plugged in afterwards."""

    def __init__(self, dim: int):
        self.rounds = 0
        self.grad_dot_x = 0.0
        self.grad_sum = np.zeros(dim)
        self.x_sum = np.zeros(dim)
        self.x_sq_sum = 0.0

    def add(self, x: np.ndarray, g: np.ndarray):
        self.rounds += 1
        self.grad_dot_x += float(g @ x)
        self.grad_sum += g
        self.x_sum += x
        self.x_sq_sum += float(x @ x)

    def linearized_regret(self, comparator: np.ndarray) -> float:
        """Σ<g_t, x_t - c>"""
        return self.grad_dot_x - float(self.grad_sum @ comparator)

    def squared_distance(self, comparator: np.ndarray) -> float:
        """Σ|x_t - c|^2"""
        value = self.x_sq_sum - 2.0 * float(self.x_sum @ comparator) + self.rounds * float(comparator @ comparator)
        return max(value, 0.0)

    def fixed_gradient_regret(self, grad: np.ndarray, comparator: np.ndarray) -> float:
        """Σ<grad, x_t - c> for one fixed vector grad."""
        return float(grad @ (self.x_sum - self.rounds * comparator))


def resolve_threads(threads: Optional[int] = None) -> int:
    """Worker count: explicit value, then OCO_LAB_THREADS, then the number of cores."""
    if threads is None:
        raw = os.environ.get(THREADS_ENV)
        if raw:
            try:
                threads = int(raw)
            except ValueError as exc:
                raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
        else:
            threads = os.cpu_count() or 1
    if threads < 1:
        raise ConfigError(f"thread count must be at least 1, got {threads}")
    return int(threads)


def _curvature_gamma(feasible_set: FeasibleSet, optimum: OptimalPoint) -> Optional[float]:
    """γ★ at x★, or None when the sphere check does not apply (x★ interior or zero mean gradient)."""
    if not np.any(optimum.grad) or not feasible_set.is_on_boundary(optimum.x_star):
        return None
    try:
        return gamma_star(feasible_set, optimum.x_star, optimum.grad)
    except PreconditionError as exc:
        logger.debug("skipping the sphere lower bound: %s", exc)
        return None


def _curvature_checks(
    feasible_set: FeasibleSet, optimum: OptimalPoint, gamma: Optional[float], sums: _RunningSums
) -> Tuple[CurvatureCheck, ...]:
    if not np.any(optimum.grad):
        return ()
    horizon = sums.rounds
    lhs = sums.fixed_gradient_regret(optimum.grad, optimum.x_star)
    squared = sums.squared_distance(optimum.x_star)
    checks = []
    if gamma is not None:
        checks.append(sphere_lower_bound_check(lhs, squared, gamma, horizon))
    if feasible_set.is_on_boundary(optimum.x_star):
        uniform = uniform_convexity_lower_bound_check(feasible_set, optimum.grad, lhs, squared, horizon)
        if uniform is not None:
            checks.append(uniform)
    return tuple(checks)


# pylint: disable=too-many-locals,too-many-statements
def run_single(
    config: ExperimentConfig,
    seed: int,
    horizon: int,
    checkpoints: Sequence[int] = (),
    gamma_cache: Optional[Dict[bytes, Optional[float]]] = None,
) -> Tuple[RunSummary, List[TracePoint]]:
    """
    Simulate one run of T rounds with a fresh set, environment and learner; deterministic in (config, seed, T).
    :param checkpoints: rounds at which a TracePoint is recorded
    :param gamma_cache: γ★ values keyed by (x★, ∇f°(x★)), shared by the horizons of one seed
    """
    feasible_set = SpecFactory.build_set(config.set_spec)
    env = SpecFactory.build_environment(config.env_spec)
    env.check_feasible_set(feasible_set)

    rng = np.random.default_rng(seed)
    env.start_run(rng, horizon)
    mean = env.run_mean_function()
    optimum = optimal_point(env, feasible_set, mean) if mean is not None else None
    mean_at_optimum = mean.value(optimum.x_star) if optimum is not None else 0.0

    gradient_bound = SpecFactory.learner_gradient_bound(config.learner_spec) or env.gradient_bound(feasible_set)
    learner = SpecFactory.build_learner(
        config.learner_spec,
        feasible_set,
        gradient_bound,
        horizon,
        optimum=None if optimum is None else optimum.x_star,
    )

    cumulative = CumulativeLoss(feasible_set.dim)
    sums = _RunningSums(feasible_set.dim)
    track_growth = env.growth_rate() is not None
    clean_gradients = np.empty((horizon, feasible_set.dim)) if track_growth else None
    wanted = set(int(c) for c in checkpoints if 1 <= c <= horizon)
    trace: List[TracePoint] = []
    suffered = 0.0
    pseudo = 0.0

    for t in range(1, horizon + 1):
        x = learner.predict()
        if not feasible_set.contains(x):
            raise InfeasiblePrediction(
                f"{learner.kind} predicted a point outside K at round {t}: violation {feasible_set.violation(x):.3e}"
            )
        played = env.sample_round(rng, t, x)
        g = played.loss.gradient(x)
        suffered += played.loss.value(x)
        cumulative.add(played.loss)
        sums.add(x, g)
        if optimum is not None:
            pseudo += mean.value(x) - mean_at_optimum
        if track_growth:
            clean = played.clean_loss if played.clean_loss is not None else played.loss
            clean_gradients[t - 1] = clean.gradient(x)
        learner.update(g, x, loss=played.loss)

        if t in wanted:
            hindsight, _ = cumulative.minimizer(feasible_set)
            reference = hindsight if optimum is None else optimum.x_star
            trace.append(
                TracePoint(
                    t,
                    pseudo if optimum is not None else float("nan"),
                    suffered - cumulative.value(hindsight),
                    float(np.sum((x - reference) ** 2)),
                )
            )

    hindsight, slack = cumulative.minimizer(feasible_set)
    realized = suffered - cumulative.value(hindsight)
    comparator = hindsight if optimum is None else optimum.x_star
    ratio = bound61_ratio_from_sums(
        sums.linearized_regret(comparator),
        sums.squared_distance(comparator),
        gradient_bound,
        learner.diameter,
        horizon,
    )

    checks: Tuple[CurvatureCheck, ...] = ()
    if optimum is not None:
        key = optimum.x_star.tobytes() + optimum.grad.tobytes()
        if gamma_cache is not None and key in gamma_cache:
            gamma = gamma_cache[key]
        else:
            gamma = _curvature_gamma(feasible_set, optimum)
            if gamma_cache is not None:
                gamma_cache[key] = gamma
        checks = _curvature_checks(feasible_set, optimum, gamma, sums)
        for check in checks:
            if not check.holds:
                logger.warning(
                    "seed %d, T=%d: %s fails, lhs %.6g < rhs %.6g", seed, horizon, check.name, check.lhs, check.rhs
                )

    budget = env.corruption_budget()
    if budget is not None and env.corruption_used > budget * (1.0 + 1e-12):
        raise CorruptionBudgetExceeded(f"seed {seed}: corruption {env.corruption_used:.12g} exceeds budget {budget}")

    summary = RunSummary(
        seed=seed,
        horizon=horizon,
        pseudo_regret=pseudo if optimum is not None else None,
        realized_regret=realized,
        bound61_ratio=ratio,
        growth_margin=growth_margin(clean_gradients, env.growth_rate()) if track_growth else None,
        corruption_used=env.corruption_used if budget is not None else None,
        curvature_checks=checks,
    )
    logger.debug(
        "seed %d, T=%d: pseudo %s, realized %.6g (hindsight slack %.2g), bound ratio %.4f",
        seed, horizon, summary.pseudo_regret, realized, slack, ratio,
    )
    return summary, trace


def run_seed(config: ExperimentConfig, seed: int) -> SeedResult:
    """All horizons of one seed; the trace is kept for the largest horizon only."""
    largest = max(config.horizons)
    gamma_cache: Dict[bytes, Optional[float]] = {}
    summaries = []
    trace: List[TracePoint] = []
    for horizon in config.horizons:
        checkpoints = config.checkpoints if horizon == largest else ()
        summary, points = run_single(config, seed, horizon, checkpoints, gamma_cache)
        summaries.append(summary)
        if horizon == largest:
            trace = points
    logger.debug("seed %d done", seed)
    return SeedResult(seed, summaries, trace)


def run_experiment(config: ExperimentConfig, threads: Optional[int] = None) -> ExperimentResult:
    """
    Run every seed of the config and reduce the runs to a RegretCurve.
    Seeds are spread over a process pool; results are collected in seed order.
    """
    validate_experiment(config)
    seeds = config.seeds()
    workers = min(resolve_threads(threads), len(seeds))
    logger.info(
        "running %s / %s / %s over T=%s with %d seed(s) on %d worker(s)",
        config.env_spec.label(), config.set_spec.label(), config.learner_spec.label(),
        config.horizons, len(seeds), workers,
    )
    if workers == 1:
        results = [run_seed(config, seed) for seed in seeds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(run_seed, [config] * len(seeds), seeds))

    summaries = [summary for result in results for summary in result.summaries]
    failing = [summary for summary in summaries if not summary.curvature_holds]
    if failing:
        logger.warning("%d run(s) violate a curvature lower bound", len(failing))
    curve = RegretCurve.aggregate(summaries)
    return ExperimentResult(config, curve, summaries, {result.seed: result.trace for result in results})


def validate_experiment(config: ExperimentConfig):
    """
    Build every component once and check every horizon before any run starts, so parameter problems
    surface as ConfigError up front instead of from inside a worker.
    """
    feasible_set = SpecFactory.build_set(config.set_spec)
    env = SpecFactory.build_environment(config.env_spec)
    env.check_feasible_set(feasible_set)
    SpecFactory.learner_gradient_bound(config.learner_spec)
    rng = np.random.default_rng(config.seed_base)
    for horizon in config.horizons:
        env.start_run(rng, horizon)
    if config.learner_spec.kind == LearnerKind.ORACLE.value and env.mean_function() is None:
        raise ConfigError(f"the oracle learner needs an environment with a mean loss; {env.kind} has none")
