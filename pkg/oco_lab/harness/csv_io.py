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
CSV artifacts of an experiment. Files are rewritten whole through a temp file and an atomic rename,
with a fixed column order and 17 significant digits, so identical runs give identical bytes.
"""
from __future__ import annotations

import logging
import os
import tempfile
from pathlib import Path
from typing import List
from typing import Union

import pandas as pd

from oco_lab.errors import ConfigError
from oco_lab.harness.experiment import ExperimentResult

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = [
    "env",
    "set",
    "learner",
    "T",
    "mean_pseudo_regret",
    "se",
    "mean_realized_regret",
    "bound61_ratio",
]
TRACE_COLUMNS = ["t", "cum_pseudo_regret", "cum_realized_regret", "dist_to_opt_sq"]
FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


def write_frame_atomic(frame: pd.DataFrame, path: PathLike):
    """Write frame to path in one rename; a reader never sees a partial file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, temp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=str(path.parent))
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="") as stream:
            frame.to_csv(stream, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        os.replace(temp_name, path)
    except BaseException:
        Path(temp_name).unlink(missing_ok=True)
        raise


def summary_frame(result: ExperimentResult) -> pd.DataFrame:
    """One row per horizon."""
    config = result.config
    rows = [
        {
            "env": config.env_spec.label(),
            "set": config.set_spec.label(),
            "learner": config.learner_spec.label(),
            "T": point.horizon,
            "mean_pseudo_regret": point.mean_pseudo_regret,
            "se": point.se,
            "mean_realized_regret": point.mean_realized_regret,
            "bound61_ratio": point.bound61_ratio,
        }
        for point in result.curve.points
    ]
    frame = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
    frame["mean_pseudo_regret"] = frame["mean_pseudo_regret"].astype(float)
    return frame


def write_experiment(result: ExperimentResult, out_dir: PathLike) -> List[Path]:
    """summary.csv plus trace_<seed>.csv per seed; returns the paths written."""
    out_dir = Path(out_dir)
    written = [out_dir / "summary.csv"]
    write_frame_atomic(summary_frame(result), written[0])
    for seed, trace in result.traces.items():
        path = out_dir / f"trace_{seed}.csv"
        write_frame_atomic(pd.DataFrame([point._asdict() for point in trace], columns=TRACE_COLUMNS), path)
        written.append(path)
    logger.info("wrote %d file(s) to %s", len(written), out_dir)
    return written


def read_summary(path: PathLike) -> pd.DataFrame:
    """Load a summary.csv, rejecting files that miss columns or hold non-numeric values."""
    try:
        frame = pd.read_csv(path)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read summary {path}: {exc}") from exc
    missing = [column for column in SUMMARY_COLUMNS if column not in frame.columns]
    if missing:
        raise ConfigError(f"summary {path} is missing column(s) {missing}")
    numeric = SUMMARY_COLUMNS[3:]
    try:
        frame[numeric] = frame[numeric].apply(pd.to_numeric, errors="raise")
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"summary {path} has non-numeric values: {exc}") from exc
    return frame
