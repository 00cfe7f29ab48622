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
import argparse
import json
import logging
import os
import sys
from typing import List
from typing import Optional

import numpy as np

# Note: Do not use dotenv in a production setup
from dotenv import load_dotenv
from pydantic import ValidationError

from oco_lab.errors import ConfigError
from oco_lab.errors import InvariantViolation
from oco_lab.errors import OcoLabError
from oco_lab.errors import PreconditionError
from oco_lab.errors import PropertyViolation
from oco_lab.geometry.sets import AxisEllipsoid
from oco_lab.harness.csv_io import read_summary
from oco_lab.harness.csv_io import write_experiment
from oco_lab.harness.experiment import run_experiment
from oco_lab.harness.fitting import fit_growth_exponent
from oco_lab.harness.geometry_check import geometry_report
from oco_lab.harness.property_suites import SUITES
from oco_lab.harness.property_suites import run_suite
from oco_lab.models.config_model import CliConfig
from oco_lab.models.config_model import ComponentSpec
from oco_lab.utils.factory import SpecFactory
from oco_lab.utils.logutils.log_bridge import LogBridge
from oco_lab.utils.version import oco_lab_version

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_INVARIANT_VIOLATION = 3

log_cfg = {
    # Refer rich guidelines for more options:
    # https://rich.readthedocs.io/en/latest/index.html
    "theme": {
        "logging.time": "bright_cyan",
        "logging.level.error": "bold red",
    },
    "time_style_key": "logging.time",
    "rich": {
        "show_time": True,
        "show_path": False,
    },
    "file": {
        "when": "midnight",
        "backupCount": 10,
        "fmt": "%(asctime)s | %(levelname)-8s | %(name)s:%(funcName)s:%(lineno)d - %(message)s",
    },
    # result tables are wide; keep them on one line when stdout is not a terminal
    "table_width": 200,
}


def _vector(text: str) -> np.ndarray:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"expected a comma-separated vector, got {text!r}") from exc
    return np.array(values)


def _fmt(vector) -> str:
    return "(" + ", ".join(f"{value:.9g}" for value in np.asarray(vector, dtype=float)) + ")"


class OcoLabRunner:
    """Command-line front end: experiments, growth fits, geometry reports and property suites."""

    def __init__(self, argv: Optional[List[str]] = None):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.load_env_variables()
        self.args = self.parse_args(argv)
        self.log_bridge = LogBridge(level=self.args.log_level, config=log_cfg)

    def load_env_variables(self):
        """Load .env from the working directory, if present."""
        env_path = os.path.join(os.getcwd(), ".env")
        if os.path.exists(env_path):
            load_dotenv(env_path)
            self.logger.debug("Loaded environment variables from: %s", env_path)

    @staticmethod
    def build_parser() -> argparse.ArgumentParser:
        """Global flags plus one sub-parser per command."""
        parser = argparse.ArgumentParser(
            prog="oco-lab",
            description="Online convex optimization experiments and geometry checks.",
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )
        parser.add_argument(
            "--log-level", type=str, default=os.getenv("OCO_LAB_LOG_LEVEL", "info"), help="Console log level"
        )
        parser.add_argument(
            "--threads", type=int, default=None, help="Worker processes for seeds (default: OCO_LAB_THREADS or cores)"
        )
        parser.add_argument("--version", action="version", version=f"%(prog)s {oco_lab_version()}")
        commands = parser.add_subparsers(dest="command", required=True)

        run = commands.add_parser("run", help="Run an experiment file and write CSV curves")
        run.add_argument("config", type=str, help="Path to the JSON experiment file")
        run.add_argument("--out", type=str, default=None, help="Output directory (overrides out.dir in the file)")

        fit = commands.add_parser("fit", help="Fit regret growth exponents from a summary.csv")
        fit.add_argument("summary", type=str, help="Path to summary.csv")

        geometry = commands.add_parser("geometry-check", help="Enclosing sphere and gamma* at a boundary point")
        source = geometry.add_mutually_exclusive_group(required=True)
        source.add_argument("--set", dest="set_json", type=str, help='Set spec as JSON: {"kind": ..., "params": ...}')
        source.add_argument("--ellipse-lambda", type=float, help="Shortcut for the ellipse W_lambda")
        geometry.add_argument("--anchor", type=str, default=None, help="Boundary point, comma-separated")
        geometry.add_argument("--grad", type=str, default=None, help="Facing direction, comma-separated")
        geometry.add_argument("--mirror", action="store_true", help="W_lambda only: use the (0, +lambda) anchor")

        prop = commands.add_parser("property-test", help="Run a named geometry property suite")
        prop.add_argument("suite", type=str, choices=sorted(SUITES), help="Suite name")
        prop.add_argument("--trials", type=int, default=1000, help="Random trials per case")
        prop.add_argument("--seed", type=int, default=0, help="Generator seed")
        return parser

    def parse_args(self, argv: Optional[List[str]] = None) -> argparse.Namespace:
        """Parse argv (sys.argv by default)."""
        return self.build_parser().parse_args(argv)

    def run(self) -> int:
        """Dispatch the command and map failures to exit codes."""
        handlers = {
            "run": self.cmd_run,
            "fit": self.cmd_fit,
            "geometry-check": self.cmd_geometry_check,
            "property-test": self.cmd_property_test,
        }
        try:
            return handlers[self.args.command]()
        except (ConfigError, PreconditionError) as exc:
            self.logger.error("configuration error: %s", exc)
            return EXIT_CONFIG_ERROR
        except PropertyViolation as exc:
            self.log_bridge.print_line(str(exc))
            return EXIT_PROPERTY_FAILURE
        except InvariantViolation as exc:
            self.logger.error("invariant violated: %s", exc)
            return EXIT_INVARIANT_VIOLATION
        except OcoLabError as exc:
            self.logger.error("%s", exc)
            return EXIT_INVARIANT_VIOLATION

    @staticmethod
    def load_config(path: str) -> CliConfig:
        """Read and schema-check an experiment file."""
        try:
            with open(path, "r", encoding="utf-8") as stream:
                document = json.load(stream)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        try:
            return CliConfig.model_validate(document)
        except ValidationError as exc:
            raise ConfigError(f"config {path} failed validation: {exc}") from exc

    def cmd_run(self) -> int:
        """Run the experiment and write summary.csv and the traces."""
        cli_config = self.load_config(self.args.config)
        try:
            config = cli_config.to_experiment_config()
        except ValidationError as exc:
            raise ConfigError(f"config {self.args.config} failed validation: {exc}") from exc
        out_dir = self.args.out or config.out_dir
        os.makedirs(out_dir, exist_ok=True)
        self.log_bridge.close()
        self.log_bridge = LogBridge(
            level=self.args.log_level, log_file=os.path.join(out_dir, "logs", "oco_lab.log"), config=log_cfg
        )
        self.logger.info("oco-lab %s, experiment file %s", oco_lab_version(), self.args.config)

        result = run_experiment(config, threads=self.args.threads)
        write_experiment(result, out_dir)
        self.log_bridge.print_table(
            f"{config.learner_spec.label()} on {config.env_spec.label()} over {config.set_spec.label()}",
            ["T", "mean pseudo-regret", "se", "mean realized regret", "bound ratio"],
            [
                [
                    point.horizon,
                    "n/a" if point.mean_pseudo_regret is None else point.mean_pseudo_regret,
                    point.se,
                    point.mean_realized_regret,
                    point.bound61_ratio,
                ]
                for point in result.curve.points
            ],
        )
        return EXIT_OK

    def cmd_fit(self) -> int:
        """Slope and R^2 of log regret against log T per (env, set, learner)."""
        frame = read_summary(self.args.summary)
        rows = []
        for (env, feasible_set, learner), group in frame.groupby(["env", "set", "learner"], sort=False):
            group = group.sort_values("T")
            column = "mean_pseudo_regret" if group["mean_pseudo_regret"].notna().all() else "mean_realized_regret"
            fit = fit_growth_exponent(group["T"].to_numpy(), group[column].to_numpy())
            rows.append(
                [env, feasible_set, learner, column, fit.slope, fit.r_squared, fit.points, group["bound61_ratio"].max()]
            )
            self.logger.info("%s / %s: slope %.6g, R^2 %.6g", env, learner, fit.slope, fit.r_squared)
        self.log_bridge.print_table(
            "Growth exponents",
            ["env", "set", "learner", "metric", "slope", "R^2", "points", "max bound ratio"],
            rows,
        )
        return EXIT_OK

    def _geometry_inputs(self):
        args = self.args
        if args.ellipse_lambda is not None:
            lam = args.ellipse_lambda
            if not 0.0 < lam <= 1.0:
                raise ConfigError(f"--ellipse-lambda must lie in (0, 1], got {lam}")
            feasible_set = AxisEllipsoid.w_lambda(lam)
            sign = 1.0 if args.mirror else -1.0
            anchor = _vector(args.anchor) if args.anchor else np.array([0.0, sign * lam])
            grad = _vector(args.grad) if args.grad else np.array([0.0, -sign])
            return feasible_set, anchor, grad
        if args.mirror:
            raise ConfigError("--mirror applies to --ellipse-lambda only")
        if not args.anchor or not args.grad:
            raise ConfigError("--set needs both --anchor and --grad")
        try:
            spec = ComponentSpec.model_validate(json.loads(args.set_json))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--set is not valid JSON: {exc}") from exc
        except ValidationError as exc:
            raise ConfigError(f"--set failed validation: {exc}") from exc
        return SpecFactory.build_set(spec), _vector(args.anchor), _vector(args.grad)

    def cmd_geometry_check(self) -> int:
        """Print the enclosing sphere and gamma*, with the closed form for W_lambda poles."""
        feasible_set, anchor, grad = self._geometry_inputs()
        report = geometry_report(feasible_set, anchor, grad)
        if not report.enclosed:
            self.log_bridge.print_line(
                f"{report.set_label} at {_fmt(report.anchor)}: not sphere-enclosed (ratio {report.facing.ratio:.3e})"
            )
            return EXIT_OK
        rows = [
            ["center", _fmt(report.facing.center)],
            ["radius", f"{report.facing.radius:.12g}"],
            ["gamma*", f"{report.gamma:.12g}"],
        ]
        if report.analytic is not None:
            rows += [
                ["closed-form center", _fmt(report.analytic.center)],
                ["closed-form radius", f"{report.analytic.radius:.12g}"],
                ["center error", f"{report.center_error:.3e}"],
                ["radius error", f"{report.radius_error:.3e}"],
            ]
        self.log_bridge.print_table(
            f"{report.set_label} at {_fmt(report.anchor)} facing {_fmt(report.grad)}", ["quantity", "value"], rows
        )
        return EXIT_OK

    def cmd_property_test(self) -> int:
        """Exit 0 iff the suite passes; a failing suite raises PropertyViolation with its first counterexample."""
        report = run_suite(self.args.suite, self.args.trials, self.args.seed)
        self.log_bridge.print_table(
            f"property suite {report.suite}",
            ["case", "holds", "worst margin", "trials"],
            [[case.case, case.holds, case.worst_margin, case.trials] for case in report.cases],
        )
        if report.passed:
            return EXIT_OK
        failing = report.first_counterexample()
        if failing is None:
            raise PropertyViolation(f"{report.suite}: expected a violation, none found in {self.args.trials} trials")
        details = {key: np.asarray(value).tolist() for key, value in (failing.counterexample or {}).items()}
        raise PropertyViolation(f"counterexample in {failing.case}: {details}", failing.counterexample)


def main(argv: Optional[List[str]] = None):
    """Console-script entry point."""
    runner = OcoLabRunner(argv)
    try:
        code = runner.run()
    finally:
        runner.log_bridge.close()
    sys.exit(code)


if __name__ == "__main__":
    main()
