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
from __future__ import annotations

import logging
from datetime import datetime
from logging.handlers import TimedRotatingFileHandler
from pathlib import Path
from typing import Any
from typing import Dict
from typing import Iterable
from typing import Optional
from typing import Sequence

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table
from rich.text import Text
from rich.theme import Theme


# pylint: disable=too-few-public-methods
class LogBridge:
    """
    Root logging setup for the oco-lab runner
    - Rich console with colored local timestamps
    - Optional rotating log file with tz-aware timestamps
    - Result tables rendered on the same console
    """

    def __init__(
        self,
        level: str = "INFO",
        log_file: Optional[str] = None,
        config: Optional[Dict[str, Any]] = None,
        console: Optional[Console] = None,
    ):
        self.level_name = level.upper()
        self.log_file = log_file
        cfg = config or {}

        theme_styles = {"logging.time": "bright_cyan", "table.header": "bold magenta"}
        theme_styles.update(cfg.get("theme", {}))
        self._time_style_key = cfg.get("time_style_key", "logging.time")

        theme = Theme(theme_styles)
        # logs go to stderr, result tables to stdout
        self.console: Console = console or Console(theme=theme, stderr=True)
        self.out_console: Console = Console(theme=theme, width=cfg.get("table_width"))

        rh_kwargs = {
            "console": self.console,
            "rich_tracebacks": False,
            "markup": False,
            "show_time": True,
            "show_path": False,
            "omit_repeated_times": False,
            "log_time_format": self._rich_time_text,
        }
        rh_kwargs.update(cfg.get("rich", {}))

        self.rich_handler: RichHandler = RichHandler(**rh_kwargs)
        self.rich_handler.setLevel(getattr(logging, self.level_name, logging.INFO))
        self.rich_handler.setFormatter(logging.Formatter("%(message)s"))

        self.file_handler: Optional[TimedRotatingFileHandler] = None
        if log_file:
            file_cfg = cfg.get("file", {})
            fmt = file_cfg.get("fmt", "%(asctime)s | %(levelname)-8s | %(name)s:%(funcName)s:%(lineno)d - %(message)s")
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            self.file_handler = TimedRotatingFileHandler(
                log_file,
                when=file_cfg.get("when", "midnight"),
                backupCount=int(file_cfg.get("backupCount", 7)),
                encoding=file_cfg.get("encoding", "utf-8"),
            )
            self.file_handler.setLevel(logging.DEBUG)
            self.file_handler.setFormatter(self._TZFormatter(fmt=fmt))

        root = logging.getLogger()
        root.setLevel(logging.DEBUG)
        root.handlers.clear()
        root.addHandler(self.rich_handler)
        if self.file_handler:
            root.addHandler(self.file_handler)

        self._logger = logging.getLogger(self.__class__.__name__)
        self._logger.debug("Runner logging initialized at level %s", self.level_name)

    def print_table(self, title: str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
        """Render rows on the console; floats are shown with 6 significant digits."""
        table = Table(title=title, header_style="table.header")
        for column in columns:
            table.add_column(column)
        for row in rows:
            table.add_row(*(f"{cell:.6g}" if isinstance(cell, float) else str(cell) for cell in row))
        self.out_console.print(table)

    def print_line(self, message: str) -> None:
        """Plain result line on stdout, no markup."""
        self.out_console.print(message, markup=False, highlight=False, soft_wrap=True)

    def close(self) -> None:
        """Detach and close the handlers installed by this bridge."""
        root = logging.getLogger()
        for handler in (self.rich_handler, self.file_handler):
            if handler is not None:
                root.removeHandler(handler)
                handler.close()

    @classmethod
    def _now_local(cls) -> datetime:
        return datetime.now().astimezone()

    def _rich_time_text(self, record=None, date=None):  # pylint: disable=unused-argument
        now = self._now_local()
        return Text(f"[{now.strftime('%Y-%m-%d %H:%M:%S')} {now.tzname()}]", style=self._time_style_key)

    class _TZFormatter(logging.Formatter):
        def formatTime(self, record, datefmt=None):
            dt = datetime.fromtimestamp(record.created).astimezone()
            return f"{dt.strftime('%Y-%m-%d %H:%M:%S')} {dt.tzname()}"
