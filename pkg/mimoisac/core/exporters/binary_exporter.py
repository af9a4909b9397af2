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

from pathlib import Path
import logging

import numpy as np

from mimoisac.core.exporters.errors import ExportError
from mimoisac.core.exporters.json_exporter import JsonExporter
from mimoisac.core.metrics import power_db
from mimoisac.core.radar import RadarCube


logger = logging.getLogger(__name__)

LITTLE_ENDIAN_FLOAT32 = np.dtype("<f4")


def _write(path: Path, array: np.ndarray) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        array.astype(LITTLE_ENDIAN_FLOAT32).tofile(path)
    except OSError as e:
        logger.error("IO error while writing %s: %s", path, e)
        raise ExportError(path, str(e)) from e


def export_iq(
    samples: np.ndarray,
    filepath: str | Path,
    sampling_period: float,
    config_hash: str = "",
    metadata: dict | None = None,
) -> tuple[Path, Path]:
    """Write interleaved I/Q samples as little-endian float32 plus a JSON sidecar.

    The file holds channel after channel, each as I0 Q0 I1 Q1 ...
    """
    path = Path(filepath)
    samples = np.atleast_2d(np.asarray(samples, dtype=complex))
    interleaved = np.stack([samples.real, samples.imag], axis=-1)
    _write(path, interleaved)
    sidecar = {
        "format": "iq-float32-le",
        "layout": "channels x samples x [I, Q]",
        "num_channels": samples.shape[0],
        "num_samples": samples.shape[1],
        "sample_rate_hz": 1.0 / sampling_period,
        "config_hash": config_hash,
        **(metadata or {}),
    }
    sidecar_path = JsonExporter(path.with_suffix(path.suffix + ".json")).export(sidecar)
    logger.info("Wrote %d x %d IQ samples to %s", *samples.shape, path)
    return path, sidecar_path


def export_cube(cube: RadarCube, filepath: str | Path, config_hash: str = "") -> tuple[Path, Path]:
    """Write the cube magnitude in dB as little-endian float32 with an axis sidecar."""
    path = Path(filepath)
    power = np.abs(cube.values) ** 2
    peak = float(power.max())
    if peak > 0:
        with np.errstate(divide="ignore"):
            magnitude_db = 10 * np.log10(power / peak)
        magnitude_db = np.maximum(magnitude_db, power_db(0.0))
    else:
        magnitude_db = np.full(power.shape, power_db(0.0))
    _write(path, magnitude_db)
    sidecar = {
        "format": "float32-le",
        "layout": "range x doppler x azimuth, C order",
        "shape": list(cube.values.shape),
        "values": "power in dB relative to the cube peak",
        "peak_power_db": power_db(peak),
        "range_m": cube.ranges.tolist(),
        "doppler_hz": cube.dopplers.tolist(),
        "azimuth_deg": np.degrees(cube.azimuths).tolist(),
        "windows": cube.windows,
        "config_hash": config_hash,
    }
    sidecar_path = JsonExporter(path.with_suffix(path.suffix + ".json")).export(sidecar)
    return path, sidecar_path
