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

from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
import logging

import numpy as np

from mimoisac.core.exporters import CsvExporter, ExportError, JsonExporter, export_iq
from mimoisac.core.runner.records import (
    RECORD_FIELDNAMES,
    SUMMARY_FIELDNAMES,
    RunRecord,
    environment_fingerprint,
    record_rows,
    records_to_json,
    summarize,
    summary_rows,
)


logger = logging.getLogger(__name__)


class ExportFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    IQBIN = "iqbin"


def export(
    records: list[RunRecord],
    fmt: ExportFormat | str,
    out_dir: str | Path,
    config_hash: str = "",
    *,
    samples: np.ndarray | None = None,
    sampling_period: float | None = None,
    stem: str = "records",
) -> list[Path]:
    """Write records (or received samples for ``iqbin``) to ``out_dir``.

    ``csv`` writes per-trial rows and per-point mean/std rows, ``json`` the
    records themselves, ``iqbin`` the samples with a JSON sidecar.

    Raises:
        ExportError: On I/O failures or missing samples.
    """
    fmt = ExportFormat(fmt)
    out_dir = Path(out_dir)
    if fmt is ExportFormat.CSV:
        return [
            CsvExporter(out_dir / f"{stem}.csv", config_hash).export_rows(
                RECORD_FIELDNAMES, record_rows(records)
            ),
            CsvExporter(out_dir / f"{stem}_summary.csv", config_hash).export_rows(
                SUMMARY_FIELDNAMES, summary_rows(summarize(records))
            ),
        ]
    if fmt is ExportFormat.JSON:
        return [JsonExporter(out_dir / f"{stem}.json").write_text(records_to_json(records))]
    if samples is None or sampling_period is None:
        raise ExportError(out_dir / f"{stem}.iq", "no samples to export")
    return list(export_iq(samples, out_dir / f"{stem}.iq", sampling_period, config_hash))


def write_manifest(out_dir: str | Path, config_hash: str, command: str, files: list[Path]) -> Path:
    """Wall-clock provenance, kept apart from the reproducible exports."""
    manifest = {
        "command": command,
        "config_hash": config_hash,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "environment": environment_fingerprint(),
        "files": sorted(str(Path(f).name) for f in files),
    }
    return JsonExporter(Path(out_dir) / "manifest.json").export(manifest)
