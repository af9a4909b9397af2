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

import json
from pathlib import Path
import logging

from mimoisac.core.exporters.errors import ExportError


logger = logging.getLogger(__name__)


class JsonExporter:
    """Write JSON documents with sorted keys."""

    def __init__(self, filepath: str | Path) -> None:
        self.filepath = Path(filepath)

    def export(self, document) -> Path:
        try:
            text = json.dumps(document, sort_keys=True, indent=2)
        except (TypeError, ValueError) as e:
            raise ExportError(self.filepath, f"not serializable: {e}") from e
        return self.write_text(text)

    def write_text(self, text: str) -> Path:
        try:
            self.filepath.parent.mkdir(parents=True, exist_ok=True)
            self.filepath.write_text(text + "\n", encoding="utf-8")
        except OSError as e:
            logger.error("IO error while writing JSON %s: %s", self.filepath, e)
            raise ExportError(self.filepath, str(e)) from e
        logger.info("Export successful : %s", self.filepath)
        return self.filepath
