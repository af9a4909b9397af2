# This file is part of MimoIsac.
# Copyright (C) 2026 MimoIsac contributors
#
# MimoIsac is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# MimoIsac is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with MimoIsac. If not, see <https://www.gnu.org/licenses/>.

import sys
import platformdirs
from pathlib import Path


class Paths:
    """Manage project directory structure and provide dynamic paths."""

    base: Path = Path(__file__).resolve().parent.parent.parent
    mimoisac_dir: Path = base / "mimoisac"
    scenarios: Path = mimoisac_dir / "scenarios"
    logs: Path = base / "logs"
    results: Path = base / "results"

    @classmethod
    def scenario(cls, filename: str) -> Path:
        """Return the absolute path of a bundled scenario file.

        Arguments:
            filename: Name of the scenario file.

        Returns:
            Path: Absolute path to the file.
        """
        return cls.scenarios / filename

    @classmethod
    def log(cls, filename: str) -> str:
        """Return the appropriate log file path based on execution environment.

        Arguments:
            filename: Name of the log file.

        Returns:
            str: Absolute path to the log file.
        """
        if getattr(sys, "frozen", False):
            log_dir = platformdirs.user_log_path(appname="mimoisac")
        else:
            log_dir = cls.logs
        log_dir.mkdir(parents=True, exist_ok=True)
        return str(log_dir / filename)

    @classmethod
    def output_dir(cls, requested: str | Path | None = None) -> Path:
        """Return (and create) the directory results are written to.

        Arguments:
            requested: Directory given on the command line, if any. Defaults to the
            platform data directory when frozen and to ``results/`` otherwise.

        Returns:
            Path: Existing output directory.
        """
        if requested is not None:
            out = Path(requested)
        elif getattr(sys, "frozen", False):
            out = platformdirs.user_data_path(appname="mimoisac") / "results"
        else:
            out = cls.results
        out.mkdir(parents=True, exist_ok=True)
        return out
