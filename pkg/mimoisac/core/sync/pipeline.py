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

from dataclasses import dataclass, replace
import logging

import numpy as np

from mimoisac.core.sync.correction import (
    FineTuneResult,
    correct_and_frame,
    fine_tune_residuals,
)
from mimoisac.core.sync.estimates import SyncEstimates, fuse_global
from mimoisac.core.sync.estimators import (
    coarse_cfo_per_channel,
    sfo_per_channel,
    sto_per_channel,
)
from mimoisac.core.waveform import FrameGrid, OfdmConfig, build_preamble


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SyncOptions:
    """Switches of the synchronization chain."""

    fine_tune: bool = True
    compensate_if_phase: bool = False
    intermediate_frequency: float = 0.0
    min_pilot_snr_db: float = 10.0
    gate_cir: bool = False
    backoff: int | None = None


@dataclass(frozen=True)
class SyncResult:
    frames: list[FrameGrid]
    estimates: SyncEstimates
    fine_tune: FineTuneResult | None


def estimate_per_channel(
    rx: np.ndarray, config: OfdmConfig, seed: int = 0, backoff: int | None = None
) -> SyncEstimates:
    """Coarse CFO, STO and SFO of every channel, not yet fused."""
    rx = np.atleast_2d(rx)
    preamble = build_preamble(config, seed)
    clock = np.arange(rx.shape[1]) * config.sampling_period
    stos, cfos, sfos = [], [], []
    for channel in rx:
        cfo = coarse_cfo_per_channel(channel, config)
        derotated = channel * np.exp(-2j * np.pi * cfo * clock)
        sto = sto_per_channel(derotated, preamble, config.sampling_period)
        single = fuse_global(SyncEstimates(sto=[sto], cfo=[cfo], sfo=[0.0]))
        frame = correct_and_frame(channel, single, config, seed, backoff)[0]
        stos.append(sto)
        cfos.append(cfo)
        sfos.append(sfo_per_channel(frame, config))
    return SyncEstimates(sto=stos, cfo=cfos, sfo=sfos)


def synchronize(
    rx: np.ndarray,
    config: OfdmConfig,
    seed: int = 0,
    options: SyncOptions | None = None,
) -> SyncResult:
    """Run per-channel estimation, fusion, correction and optional fine tuning.

    Arguments:
        rx: (channels x samples) received samples.
        config: OFDM parameters.
        seed: Seed of the transmitted preamble and pilots.
        options: Chain switches.

    Returns:
        SyncResult: Received grids, estimates and fine-tuning diagnostics.
    """
    options = options or SyncOptions()
    estimates = fuse_global(estimate_per_channel(rx, config, seed, options.backoff))
    frames = correct_and_frame(rx, estimates, config, seed, options.backoff)
    logger.info(
        "Synchronized %d channels: CFO %.1f Hz, SFO %.3f ppm, start %.2f ns",
        estimates.num_channels,
        estimates.cfo_global,
        estimates.sfo_global * 1e6,
        estimates.sto_global * 1e9,
    )
    if not options.fine_tune:
        return SyncResult(frames=frames, estimates=estimates, fine_tune=None)

    tuned = fine_tune_residuals(
        frames,
        config,
        min_pilot_snr_db=options.min_pilot_snr_db,
        compensate_if_phase=options.compensate_if_phase,
        intermediate_frequency=options.intermediate_frequency,
        gate_cir=options.gate_cir,
    )
    # All channels are framed at the fused start, so the fine delay already
    # contains each channel's integer offset; the fused one stays in coarse_residual_sto.
    estimates = replace(
        estimates, residual_sto=tuned.residual_sto, residual_cfo=tuned.residual_cfo
    )
    return SyncResult(frames=tuned.frames, estimates=estimates, fine_tune=tuned)
