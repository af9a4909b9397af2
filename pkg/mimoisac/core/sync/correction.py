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
import logging

import numpy as np

from mimoisac.core.channel.resampler import DEFAULT_RESAMPLER
from mimoisac.core.errors import MimoIsacError
from mimoisac.core.sync.estimates import SyncEstimates
from mimoisac.core.sync.estimators import (
    inner_band,
    pilot_estimates,
    pilot_subcarrier_offsets,
    weighted_slope,
)
from mimoisac.core.waveform import FrameGrid, OfdmConfig, from_time_domain


logger = logging.getLogger(__name__)

DEFAULT_BACKOFF = 16
MIN_PILOT_SNR_DB = 10.0


class FramingError(MimoIsacError):
    """The corrected frame window does not lie inside the received samples."""


def window_backoff(config: OfdmConfig, backoff: int | None = None) -> int:
    """Samples the FFT window is advanced into the cyclic prefix."""
    if backoff is None:
        backoff = min(DEFAULT_BACKOFF, config.cp_length // 4)
    if not 0 <= backoff <= config.cp_length:
        raise FramingError(f"Backoff {backoff} outside [0, {config.cp_length}]")
    return backoff


def correct_and_frame(
    rx: np.ndarray,
    estimates: SyncEstimates,
    config: OfdmConfig,
    seed: int = 0,
    backoff: int | None = None,
) -> list[FrameGrid]:
    """Resample, de-rotate and demodulate every channel with the fused estimates.

    The window starts ``backoff`` samples before the fused frame start so that
    the interpolator never reaches into the following symbol. The resulting
    integer shift is undone in the frequency domain.

    Arguments:
        rx: (channels x samples) received samples, or a single channel.
        estimates: Fused estimates.
        config: OFDM parameters.
        seed: Pilot seed attached to the returned grids.
        backoff: Window advance in samples; defaults to min(16, N_CP / 4).

    Returns:
        list[FrameGrid]: One received grid Y per channel.

    Raises:
        FramingError: If the frame window falls outside the samples.
    """
    if not estimates.is_fused:
        raise FramingError("Estimates must be fused before correction")
    rx = np.atleast_2d(rx)
    backoff = window_backoff(config, backoff)
    start = int(round(estimates.sto_global / config.sampling_period)) - backoff
    ratio = 1 + estimates.sfo_global
    j = np.arange(config.frame_length)
    positions = start + j / ratio
    # The preamble is not demodulated, so the window may start inside it.
    if start + config.symbol_length < 0 or positions[-1] > rx.shape[1] - 1:
        raise FramingError(
            f"Frame window [{start}, {positions[-1]:.1f}] outside {rx.shape[1]} samples"
        )
    time = (start * ratio + j) * config.sampling_period
    derotation = np.exp(-2j * np.pi * estimates.cfo_global * time)
    shift = np.exp(2j * np.pi * config.subcarrier_offsets * backoff / config.num_subcarriers)

    mask = config.pilot_mask()
    frames = []
    for channel in rx:
        corrected = DEFAULT_RESAMPLER(channel, positions) * derotation
        cells = from_time_domain(corrected, config, start=0) * shift[:, None]
        frames.append(
            FrameGrid(
                cells=cells,
                pilot_mask=mask,
                subcarrier_spacing=config.subcarrier_spacing,
                symbol_duration=config.symbol_duration,
                seed=seed,
            )
        )
    logger.debug("Framed %d channels starting at sample %d", len(frames), start)
    return frames


@dataclass(frozen=True)
class FineTuneResult:
    """Per-channel fine-tuned grids and the residuals that were removed."""

    frames: list[FrameGrid]
    residual_sto: np.ndarray
    residual_cfo: np.ndarray
    pilot_snr_db: np.ndarray
    applied: np.ndarray


def _pilot_snr_db(cir_power: np.ndarray, peak: int, gate: int) -> float:
    taps = len(cir_power)
    distance = np.abs(np.arange(taps) - peak)
    distance = np.minimum(distance, taps - distance)
    inside = distance <= gate
    if np.all(inside):
        return float("inf")
    noise = float(np.mean(cir_power[~inside]))
    if noise <= 0:
        return float("inf")
    return float(10 * np.log10(np.sum(cir_power[inside]) / (taps * noise)))


def estimate_residuals(
    frame: FrameGrid, config: OfdmConfig, gate_cir: bool = False
) -> tuple[float, float, float]:
    """Residual delay (s), residual CFO (Hz) and pilot SNR (dB) of the dominant path."""
    estimates = pilot_estimates(frame, config)
    num_pilots = estimates.shape[0]
    cir = np.fft.ifft(estimates, axis=0)
    cir_power = np.sum(np.abs(cir) ** 2, axis=1)
    peak = int(np.argmax(cir_power))
    gate = max(1, num_pilots // 16)
    snr_db = _pilot_snr_db(cir_power, peak, gate)

    symbol_step = config.pilot_symbol_spacing * config.symbol_duration
    pilot_times = np.arange(config.num_pilot_symbols) * symbol_step
    residual_cfo = 0.0
    if len(pilot_times) >= 2:
        dominant = cir[peak]
        phases = np.unwrap(np.angle(dominant))
        residual_cfo = weighted_slope(pilot_times, phases, np.abs(dominant)) / (2 * np.pi)

    averaged = np.mean(
        estimates * np.exp(-2j * np.pi * residual_cfo * pilot_times)[None, :], axis=1
    )
    if gate_cir:
        taps = np.fft.ifft(averaged)
        distance = np.abs(np.arange(num_pilots) - peak)
        distance = np.minimum(distance, num_pilots - distance)
        taps[distance > gate] = 0
        averaged = np.fft.fft(taps)

    offsets = pilot_subcarrier_offsets(config)
    order = np.argsort(offsets)
    band = inner_band(offsets[order], config.num_subcarriers)
    sorted_estimates = averaged[order]
    pairs = band[1:] & band[:-1]
    correlation = np.sum(
        (sorted_estimates[1:] * np.conj(sorted_estimates[:-1]))[pairs]
    )
    step = config.pilot_subcarrier_spacing * config.subcarrier_spacing
    residual_sto = float(-np.angle(correlation) / (2 * np.pi * step))
    return residual_sto, float(residual_cfo), snr_db


def fine_tune_residuals(
    frames: list[FrameGrid],
    config: OfdmConfig,
    *,
    min_pilot_snr_db: float = MIN_PILOT_SNR_DB,
    compensate_if_phase: bool = False,
    intermediate_frequency: float = 0.0,
    gate_cir: bool = False,
) -> FineTuneResult:
    """Remove each channel's residual delay and CFO of the dominant (LoS) path.

    The residual CFO is the phase slope of the dominant pilot CIR tap across
    pilot symbols, the residual delay the phase slope of the CFO-corrected,
    time-averaged pilot CFR across adjacent pilot subcarriers of the inner band.
    Both are removed so that the dominant path sits at zero delay and zero
    Doppler. The phase at subcarrier 0 of the first symbol is kept, unless
    ``compensate_if_phase`` also removes the IF rotation of the residual delay.

    Channels whose pilot SNR is below ``min_pilot_snr_db`` are left unchanged,
    get NaN residuals and a warning is logged.
    """
    times = np.arange(config.num_symbols) * config.symbol_duration
    frequencies = config.subcarrier_frequencies
    if compensate_if_phase:
        frequencies = frequencies + intermediate_frequency

    tuned, residual_sto, residual_cfo, snrs, applied = [], [], [], [], []
    for channel, frame in enumerate(frames):
        sto, cfo, snr_db = estimate_residuals(frame, config, gate_cir)
        snrs.append(snr_db)
        if snr_db < min_pilot_snr_db:
            logger.warning(
                "Fine tuning skipped on channel %d: pilot SNR %.1f dB below %.1f dB "
                "(residual STO %.3f ns, residual CFO %.1f Hz)",
                channel,
                snr_db,
                min_pilot_snr_db,
                sto * 1e9,
                cfo,
            )
            tuned.append(frame)
            residual_sto.append(np.nan)
            residual_cfo.append(np.nan)
            applied.append(False)
            continue
        correction = np.exp(2j * np.pi * frequencies * sto)[:, None] * np.exp(
            -2j * np.pi * cfo * times
        )[None, :]
        tuned.append(frame.with_cells(frame.cells * correction))
        residual_sto.append(sto)
        residual_cfo.append(cfo)
        applied.append(True)

    return FineTuneResult(
        frames=tuned,
        residual_sto=np.array(residual_sto),
        residual_cfo=np.array(residual_cfo),
        pilot_snr_db=np.array(snrs),
        applied=np.array(applied),
    )
