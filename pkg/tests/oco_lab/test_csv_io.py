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
import csv
import io
import math
import os
import shutil
import tempfile
import unittest

from oco_lab.errors import ConfigError
from oco_lab.harness.csv_io import SUMMARY_COLUMNS
from oco_lab.harness.csv_io import TRACE_COLUMNS
from oco_lab.harness.csv_io import read_summary
from oco_lab.harness.csv_io import write_experiment
from oco_lab.harness.experiment import run_experiment
from oco_lab.models.config_model import ComponentSpec
from oco_lab.models.config_model import ExperimentConfig


def _config(env: ComponentSpec, feasible_set: ComponentSpec) -> ExperimentConfig:
    return ExperimentConfig(
        set_spec=feasible_set,
        env_spec=env,
        learner_spec=ComponentSpec(kind="ogd"),
        horizons=[8, 16, 32, 64],
        seed_count=2,
    )


GROWTH = _config(
    ComponentSpec(kind="beta_bernoulli_growth", params={"level": 0.1}), ComponentSpec(kind="ellipse_w", params={"lam": 0.5})
)
ADVERSARIAL = _config(
    ComponentSpec(kind="alternating_adversary"), ComponentSpec(kind="box", params={"lo": [-1.0], "hi": [1.0]})
)


class TestCsvArtifacts(unittest.TestCase):
    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp_dir, ignore_errors=True)

    def _read(self, *parts) -> bytes:
        with open(os.path.join(self.tmp_dir, *parts), "rb") as stream:
            return stream.read()

    def test_files_and_headers(self):
        written = write_experiment(run_experiment(GROWTH, threads=1), os.path.join(self.tmp_dir, "new", "dir"))
        self.assertEqual([path.name for path in written], ["summary.csv", "trace_0.csv", "trace_1.csv"])
        summary = self._read("new", "dir", "summary.csv").decode("utf-8").splitlines()
        self.assertEqual(summary[0], ",".join(SUMMARY_COLUMNS))
        self.assertEqual(len(summary), 5)
        trace = self._read("new", "dir", "trace_0.csv").decode("utf-8").splitlines()
        self.assertEqual(trace[0], ",".join(TRACE_COLUMNS))
        self.assertEqual([line.split(",")[0] for line in trace[1:]], ["1", "2", "4", "8", "16", "32", "64"])

    def test_identical_runs_give_identical_bytes(self):
        write_experiment(run_experiment(GROWTH, threads=1), os.path.join(self.tmp_dir, "a"))
        write_experiment(run_experiment(GROWTH, threads=1), os.path.join(self.tmp_dir, "b"))
        for name in ("summary.csv", "trace_0.csv", "trace_1.csv"):
            self.assertEqual(self._read("a", name), self._read("b", name))

    def test_round_trip_through_the_reader(self):
        result = run_experiment(GROWTH, threads=1)
        write_experiment(result, self.tmp_dir)
        frame = read_summary(os.path.join(self.tmp_dir, "summary.csv"))
        self.assertEqual(frame["T"].tolist(), [8, 16, 32, 64])
        self.assertEqual(frame["mean_pseudo_regret"].tolist(), [point.mean_pseudo_regret for point in result.curve.points])

    def test_missing_pseudo_regret_is_empty(self):
        write_experiment(run_experiment(ADVERSARIAL, threads=1), self.tmp_dir)
        row = list(csv.reader(io.StringIO(self._read("summary.csv").decode("utf-8"))))[1]
        self.assertEqual(row[SUMMARY_COLUMNS.index("mean_pseudo_regret")], "")
        frame = read_summary(os.path.join(self.tmp_dir, "summary.csv"))
        self.assertTrue(math.isnan(frame["mean_pseudo_regret"].iloc[0]))

    def test_malformed_summaries(self):
        path = os.path.join(self.tmp_dir, "bad.csv")
        with open(path, "w", encoding="utf-8") as stream:
            stream.write("env,set,T\nx,y,8\n")
        with self.assertRaises(ConfigError):
            read_summary(path)

        with open(path, "w", encoding="utf-8") as stream:
            stream.write(",".join(SUMMARY_COLUMNS) + "\nx,y,z,eight,1,1,1,1\n")
        with self.assertRaises(ConfigError):
            read_summary(path)

        with self.assertRaises(ConfigError):
            read_summary(os.path.join(self.tmp_dir, "missing.csv"))


if __name__ == "__main__":
    unittest.main()
