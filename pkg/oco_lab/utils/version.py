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
Version string reported by ``oco-lab --version`` and stamped into every run log.
"""

import logging
from importlib.metadata import PackageNotFoundError
from importlib.metadata import version as library_version
from pathlib import Path

logger = logging.getLogger(__name__)

DISTRIBUTION_NAME = "oco-lab"
UNKNOWN = "unknown"

# oco_lab/utils/version.py -> repo root of a source checkout
_REPO_ROOT = Path(__file__).resolve().parents[2]


def oco_lab_version() -> str:
    """Installed distribution version, else the setuptools-scm version of the checkout, else 'unknown'."""
    try:
        return str(library_version(DISTRIBUTION_NAME))
    except PackageNotFoundError:
        pass
    try:
        from setuptools_scm import get_version  # pylint: disable=import-outside-toplevel

        return str(get_version(root=str(_REPO_ROOT)))
    except (ImportError, LookupError, OSError) as exc:
        logger.debug("no version for an uninstalled checkout: %s", exc)
        return UNKNOWN
