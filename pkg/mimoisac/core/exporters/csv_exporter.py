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

import csv
from pathlib import Path
import logging
from typing import Iterable

from mimoisac.core.exporters.errors import ExportError


logger = logging.getLogger(__name__)

# Units of the columns written by this module.
UNITS = {
    "sigma_tau_s": "s",
    "sigma_tau_samples": "T_s",
    "evm_db": "dB",
    "evm_spread_db": "dB",
    "pplr_db": "dB",
    "range_pslr_db": "dB",
    "range_islr_db": "dB",
    "azimuth_pslr_db": "dB",
    "azimuth_islr_db": "dB",
    "sir_db": "dB",
    "sigma_theta_deg": "degrees",
    "sigma_theta_wrapped_deg": "degrees",
    "range_m": "m",
    "doppler_hz": "Hz",
    "azimuth_deg": "degrees",
    "power_db": "dB",
    "cfo_hz": "Hz",
    "sfo_ppm": "ppm",
    "sto_ns": "ns",
    "coarse_residual_sto_ns": "ns",
    "residual_sto_ns": "ns",
    "residual_cfo_hz": "Hz",
    "pilot_snr_db": "dB",
    "true_abe_delay_ns": "ns",
    "i": "linear",
    "q": "linear",
}


def _unit(key: str) -> str | None:
    if key in UNITS:
        return UNITS[key]
    base, _, stat = key.rpartition("_")
    return UNITS.get(base) if stat in ("mean", "std") else None


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


class CsvExporter:
    """Write result tables as CSV with a commented provenance header."""

    def __init__(self, filepath: str | Path, config_hash: str = "") -> None:
        self.filepath = Path(filepath)
        self.config_hash = config_hash
        logger.debug("CsvExporter initialized with filepath: %s", self.filepath)

    def export_rows(self, fieldnames: list[str], rows: Iterable[dict]) -> Path:
        """Write arbitrary rows in the given column order."""
        rows = [{key: _format(row.get(key)) for key in fieldnames} for row in rows]
        logger.info("Starting export to %s with %d rows", self.filepath, len(rows))
        try:
            self.filepath.parent.mkdir(parents=True, exist_ok=True)
            with open(self.filepath, "w", newline="", encoding="utf-8") as f:
                f.write(f"# config_hash: {self.config_hash}\n")
                units = [f"{key}={_unit(key)}" for key in fieldnames if _unit(key)]
                if units:
                    f.write(f"# units: {' '.join(units)}\n")
                writer = csv.DictWriter(f, fieldnames=fieldnames, lineterminator="\n")
                writer.writeheader()
                writer.writerows(rows)
        except OSError as e:
            logger.error("IO error while writing CSV %s: %s", self.filepath, e)
            raise ExportError(self.filepath, str(e)) from e
        logger.info("Export successful : %s", self.filepath)
        return self.filepath
