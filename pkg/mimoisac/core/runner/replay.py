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

from dataclasses import dataclass
from pathlib import Path
import logging

import numpy as np

from mimoisac.core.array import azimuth_grid
from mimoisac.core.exporters import CsvExporter, JsonExporter, export_cube
from mimoisac.core.metrics import power_db
from mimoisac.core.radar import (
    RadarCube,
    RangeAzimuthCut,
    doa_cube,
    make_window,
    range_doppler_image,
)
from mimoisac.core.runner.chain import LinkOutcome, range_azimuth_cut, run_link, single_channel_zf, trial_streams
from mimoisac.core.runner.config import ScenarioConfig
from mimoisac.core.waveform import FrameGrid


logger = logging.getLogger(__name__)

SYNC_FIELDNAMES = [
    "channel",
    "sto_ns",
    "cfo_hz",
    "sfo_ppm",
    "coarse_residual_sto_ns",
    "residual_sto_ns",
    "residual_cfo_hz",
    "pilot_snr_db",
    "true_abe_delay_ns",
]


@dataclass(frozen=True)
class ReplayResult:
    outcome: LinkOutcome
    cube: RadarCube
    cut: RangeAzimuthCut
    sync_report: dict
    files: list[Path]


def radar_cube(scenario: ScenarioConfig, outcome: LinkOutcome) -> RadarCube:
    """Full range-Doppler-azimuth cube of one link."""
    windows = scenario.windows
    cells = outcome.radar_cfr.cells
    num_rx, num_subcarriers, num_symbols = cells.shape
    window_range = make_window(windows.range, num_subcarriers, windows.sidelobe_db)
    window_doppler = make_window(windows.doppler, num_symbols, windows.sidelobe_db)
    images = np.stack(
        [range_doppler_image(channel, window_range, window_doppler) for channel in cells]
    )
    return doa_cube(
        images,
        scenario.rx_geometry(),
        azimuth_grid(scenario.arrays.azimuth_oversampling * num_rx),
        make_window(windows.azimuth, num_rx, windows.sidelobe_db),
        outcome.radar_cfr.bandwidth,
        outcome.radar_cfr.symbol_duration,
        extra_windows={"range": window_range.to_dict(), "doppler": window_doppler.to_dict()},
    )


def sync_report(outcome: LinkOutcome) -> dict:
    """Per-channel and global synchronization estimates next to the ground truth."""
    estimates = outcome.sync.estimates
    report = estimates.to_dict()
    fine = outcome.sync.fine_tune
    truth = outcome.realization.ground_truth
    for index, row in enumerate(report["channels"]):
        row["pilot_snr_db"] = None if fine is None else float(fine.pilot_snr_db[index])
        row["true_abe_delay_ns"] = truth.abe_dominant_delays[index] * 1e9
    report["ground_truth"] = {
        "sto_ns": truth.sto * 1e9,
        "cfo_hz": truth.cfo,
        "sfo_ppm": truth.sfo * 1e6,
    }
    return report


def _constellation_rows(frame: FrameGrid) -> list[dict]:
    data = ~frame.pilot_mask
    if frame.erased is not None:
        data &= ~frame.erased
    subcarriers, symbols = np.nonzero(data)
    values = frame.cells[subcarriers, symbols]
    return [
        {"subcarrier": int(k), "symbol": int(m), "i": float(v.real), "q": float(v.imag)}
        for k, m, v in zip(subcarriers, symbols, values)
    ]


def _db(power: np.ndarray, peak: float) -> np.ndarray:
    return np.array([power_db(value / peak) for value in power.reshape(-1)]).reshape(power.shape)


def run_scenario_replay(scenario: ScenarioConfig, out_dir: str | Path) -> ReplayResult:
    """One end-to-end run writing the sync report, constellations, cuts and cube.

    Raises:
        MimoIsacError: If any stage of the chain fails.
    """
    out_dir = Path(out_dir)
    config_hash = scenario.config_hash
    outcome = run_link(scenario, trial_streams(scenario.seed, 0, 0))
    cube = radar_cube(scenario, outcome)
    cut = range_azimuth_cut(scenario, outcome.radar_cfr)
    report = sync_report(outcome)

    files = [
        CsvExporter(out_dir / "sync_report.csv", config_hash).export_rows(
            SYNC_FIELDNAMES, report["channels"]
        ),
        JsonExporter(out_dir / "sync_report.json").export(report),
        JsonExporter(out_dir / "ground_truth.json").write_text(
            outcome.realization.ground_truth.to_json()
        ),
    ]
    constellation_fields = ["subcarrier", "symbol", "i", "q"]
    files.append(
        CsvExporter(out_dir / "constellation_zf_ch0.csv", config_hash).export_rows(
            constellation_fields, _constellation_rows(single_channel_zf(outcome, 0))
        )
    )
    files.append(
        CsvExporter(out_dir / "constellation_mrc.csv", config_hash).export_rows(
            constellation_fields, _constellation_rows(outcome.combined)
        )
    )

    power = np.abs(cube.values) ** 2
    peak = float(power.max())
    azimuth_index = int(np.unravel_index(np.argmax(power), power.shape)[2])
    range_doppler = _db(power[:, :, azimuth_index], peak)
    files.append(
        CsvExporter(out_dir / "range_doppler.csv", config_hash).export_rows(
            ["range_m", "doppler_hz", "power_db"],
            (
                {"range_m": float(r), "doppler_hz": float(d), "power_db": float(range_doppler[i, j])}
                for i, r in enumerate(cube.ranges)
                for j, d in enumerate(cube.dopplers)
            ),
        )
    )
    cut_power = np.abs(cut.values) ** 2
    range_azimuth = _db(cut_power, float(cut_power.max()))
    files.append(
        CsvExporter(out_dir / "range_azimuth.csv", config_hash).export_rows(
            ["range_m", "azimuth_deg", "power_db"],
            (
                {"range_m": float(r), "azimuth_deg": float(np.degrees(a)), "power_db": float(range_azimuth[i, j])}
                for i, r in enumerate(cut.ranges)
                for j, a in enumerate(cut.azimuths)
            ),
        )
    )
    files.extend(export_cube(cube, out_dir / "cube.f32", config_hash))
    logger.info("Replay %s wrote %d files to %s", scenario.name, len(files), out_dir)
    return ReplayResult(outcome=outcome, cube=cube, cut=cut, sync_report=report, files=files)
