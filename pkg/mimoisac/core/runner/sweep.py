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

from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
import logging

import numpy as np
from tqdm import tqdm

from mimoisac.core.channel import HardwareResponse, sample_rayleigh_channel_delays
from mimoisac.core.errors import MimoIsacError
from mimoisac.core.metrics import (
    PhaseMapping,
    delay_to_phase_std,
    evm,
    mean_image_sir,
    peak_sidelobe_metrics,
    pplr,
)
from mimoisac.core.radar import RadarCfr, RangeAzimuthCut, mainlobe_half_width, make_window
from mimoisac.core.runner.chain import ABE_STREAM, range_azimuth_cut, run_link, trial_streams
from mimoisac.core.runner.config import ScenarioConfig
from mimoisac.core.runner.records import (
    STATUS_FAILED,
    PointSummary,
    RunRecord,
    failure_rate,
    summarize,
)


logger = logging.getLogger(__name__)

# spawn_key point index of the mismatch-free reference run.
REFERENCE_POINT = 2**32 - 1


@dataclass(frozen=True)
class ReferencePeak:
    """Target cell and its power in the lobe cut of the mismatch-free run."""

    power: float
    cell: tuple[int, int]


@dataclass(frozen=True)
class SweepResult:
    config_hash: str
    records: list[RunRecord]
    summaries: list[PointSummary]
    reference_peak: ReferencePeak
    failure_rate: float


def cut_metrics(
    cut: RangeAzimuthCut,
    reference: ReferencePeak | None,
    sir_cut: RangeAzimuthCut | None = None,
    sir_guard: tuple[int, int] = (0, 0),
) -> dict:
    """Image quality of a zero-Doppler cut at the target cell.

    Lobe metrics and PPLR come from ``cut``, the SIR from ``sir_cut`` when
    given. Without a reference the strongest cell is taken as the target.
    """
    power = np.abs(cut.values) ** 2
    if reference is None:
        target = tuple(int(i) for i in np.unravel_index(np.argmax(power), power.shape))
    else:
        target = reference.cell
    range_lobes = peak_sidelobe_metrics(cut.values[:, target[1]], circular=True)
    azimuth_lobes = peak_sidelobe_metrics(cut.values[target[0], :], circular=True)
    sir_values = (cut if sir_cut is None else sir_cut).values
    return {
        "pplr_db": None if reference is None else pplr(float(power[target]), reference.power),
        "range_pslr_db": range_lobes.pslr_db,
        "range_islr_db": range_lobes.islr_db,
        "azimuth_pslr_db": azimuth_lobes.pslr_db,
        "azimuth_islr_db": azimuth_lobes.islr_db,
        "sir_db": mean_image_sir(sir_values, target, sir_guard),
    }


def sir_guard(scenario: ScenarioConfig) -> tuple[int, int]:
    """Range and azimuth half-widths of the target mainlobe in the image cut."""
    windows = scenario.windows
    config = scenario.ofdm_config()
    num_rx = scenario.arrays.num_rx
    range_window = make_window(windows.range, config.num_subcarriers, windows.sidelobe_db)
    azimuth_window = make_window(windows.azimuth, num_rx, windows.sidelobe_db)
    return (
        mainlobe_half_width(range_window, config.num_subcarriers * windows.range_oversampling),
        mainlobe_half_width(azimuth_window, scenario.arrays.azimuth_oversampling * num_rx),
    )


def _lobe_cut(scenario: ScenarioConfig, radar_cfr: RadarCfr) -> RangeAzimuthCut:
    return range_azimuth_cut(scenario, radar_cfr, scenario.windows.lobe_window)


def reference_peak(scenario: ScenarioConfig) -> ReferencePeak:
    """Strongest cell of the lobe cut of the scenario without delay mismatch."""
    streams = trial_streams(scenario.seed, REFERENCE_POINT, 0)
    abe = HardwareResponse.ideal(scenario.arrays.num_rx)
    outcome = run_link(scenario, streams, abe)
    power = np.abs(_lobe_cut(scenario, outcome.radar_cfr).values) ** 2
    cell = tuple(int(i) for i in np.unravel_index(np.argmax(power), power.shape))
    logger.debug("Reference peak %.3e at cell %s", power[cell], cell)
    return ReferencePeak(power=float(power[cell]), cell=cell)


def run_trial(
    scenario: ScenarioConfig,
    point_index: int,
    trial_index: int,
    sigma_tau_samples: float,
    reference: ReferencePeak | None = None,
) -> RunRecord:
    """Run one work unit; failures are returned as records, never raised."""
    config = scenario.ofdm_config()
    sigma_tau = sigma_tau_samples * config.sampling_period
    f_if = scenario.impairments.intermediate_frequency_hz
    base = dict(
        config_hash=scenario.config_hash,
        seed=scenario.seed,
        point_index=point_index,
        trial_index=trial_index,
        sigma_tau=sigma_tau,
        sigma_tau_samples=sigma_tau_samples,
    )
    try:
        streams = trial_streams(scenario.seed, point_index, trial_index)
        delays = sample_rayleigh_channel_delays(
            sigma_tau, scenario.arrays.num_rx, np.random.default_rng(streams[ABE_STREAM])
        )
        outcome = run_link(scenario, streams, HardwareResponse.from_delays(delays))
        quality = evm(outcome.combined, outcome.frame)
        image = range_azimuth_cut(scenario, outcome.radar_cfr)
        lobes = image
        if scenario.windows.lobe_window is not None:
            lobes = _lobe_cut(scenario, outcome.radar_cfr)
        metrics = {
            "evm_db": quality.mean_db,
            "evm_spread_db": quality.spread_db,
            "ber": outcome.decoded.coded_ber,
            "uncoded_ber": outcome.decoded.uncoded_ber,
            **cut_metrics(lobes, reference, image, sir_guard(scenario)),
            "sigma_theta_deg": float(np.degrees(delay_to_phase_std(sigma_tau, f_if))),
            "sigma_theta_wrapped_deg": float(
                np.degrees(delay_to_phase_std(sigma_tau, f_if, PhaseMapping.WRAPPED))
            ),
        }
    except MimoIsacError as e:
        logger.warning("Trial %d at point %d failed: %s", trial_index, point_index, e)
        return RunRecord(**base, status=STATUS_FAILED, error=f"{type(e).__name__}: {e}")
    except Exception as e:
        logger.warning(
            "Unexpected error in trial %d at point %d: %s", trial_index, point_index, e
        )
        return RunRecord(**base, status=STATUS_FAILED, error=f"{type(e).__name__}: {e}")
    return RunRecord(**base, metrics=metrics)


def _trial_job(args: tuple) -> RunRecord:
    return run_trial(*args)


def run_sweep(scenario: ScenarioConfig, progress: bool = True) -> SweepResult:
    """Monte-Carlo sweep over the sigma_tau grid.

    Trials run on a bounded process pool (``sweep.workers``; one worker runs
    inline). Each trial draws from its own seed sequence keyed by
    (seed, point, trial), so results do not depend on scheduling.
    """
    grid = scenario.sweep.grid()
    trials = scenario.trials
    logger.info(
        "Starting sweep %s: %d points x %d trials (hash %s)",
        scenario.name,
        len(grid),
        trials,
        scenario.config_hash[:12],
    )
    reference = reference_peak(scenario)
    jobs = [
        (scenario, point, trial, float(value), reference)
        for point, value in enumerate(grid)
        for trial in range(trials)
    ]

    workers = scenario.sweep.workers
    records: list[RunRecord] = []
    with tqdm(total=len(jobs), desc="sweep", unit="trial", disable=not progress) as bar:
        if workers == 1:
            for job in jobs:
                records.append(_trial_job(job))
                bar.update()
        else:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                futures = [executor.submit(_trial_job, job) for job in jobs]
                for future in as_completed(futures):
                    records.append(future.result())
                    bar.update()

    records.sort(key=lambda r: (r.point_index, r.trial_index))
    rate = failure_rate(records)
    if rate:
        logger.warning("%.1f %% of %d trials failed", 100 * rate, len(records))
    logger.info("Sweep %s finished", scenario.name)
    return SweepResult(
        config_hash=scenario.config_hash,
        records=records,
        summaries=summarize(records),
        reference_peak=reference,
        failure_rate=rate,
    )
