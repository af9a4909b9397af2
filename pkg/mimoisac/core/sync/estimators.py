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

import logging
import math

import numpy as np
from scipy import signal

from mimoisac.core.channel.resampler import DEFAULT_RESAMPLER
from mimoisac.core.errors import MimoIsacError
from mimoisac.core.waveform import FrameBuilder, FrameGrid, OfdmConfig


logger = logging.getLogger(__name__)

PLATEAU_THRESHOLD = 0.5
PLATEAU_FRACTION = 0.9
ENERGY_FLOOR = 1e-3
STO_PEAK_THRESHOLD_DB = 6.0
INNER_BAND_FRACTION = 0.8
# Parabolic bias of integer-aligned peaks stays below this; the backoff absorbs the rest.
_FLOOR_GUARD = 0.1


class PreambleNotFoundError(MimoIsacError):
    """No Schmidl-Cox plateau above threshold in the received samples."""


class SyncFailureError(MimoIsacError):
    """Preamble correlation peak not distinguishable from the noise floor."""


class InsufficientPilotsError(MimoIsacError):
    """Too few pilot symbols or subcarriers for an estimate."""


def _sliding_sum(values: np.ndarray, width: int) -> np.ndarray:
    cumulative = np.concatenate([[0], np.cumsum(values)])
    return cumulative[width:] - cumulative[:-width]


def timing_metric(rx: np.ndarray, half_length: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Half-symbol lag autocorrelation P, energy R and metric |P|^2 / R^2.

    Windows whose energy is below 1e-3 of the maximum get a zero metric.
    """
    rx = np.asarray(rx)
    if len(rx) < 2 * half_length:
        raise PreambleNotFoundError(
            f"{len(rx)} samples are too few for a {2 * half_length}-sample preamble"
        )
    products = np.conj(rx[:-half_length]) * rx[half_length:]
    correlation = _sliding_sum(products, half_length)
    energy = _sliding_sum(np.abs(rx[half_length:]) ** 2, half_length)
    count = len(rx) - 2 * half_length + 1
    correlation = correlation[:count]
    energy = energy[:count]
    valid = energy >= ENERGY_FLOOR * energy.max() if energy.max() > 0 else energy > 0
    metric = np.zeros(count)
    metric[valid] = np.abs(correlation[valid]) ** 2 / energy[valid] ** 2
    return correlation, energy, metric


def _periodic_windows(metric: np.ndarray, peak: int, config: OfdmConfig) -> np.ndarray:
    """Window starts lying entirely inside the preamble's cyclic prefix and body.

    The plateau runs past the body start while the metric decays from one;
    ``edge`` bounds that overshoot with a margin for data-dependent ripple.
    The interpolator kernel spreads both region edges by its half width.
    """
    half = config.num_subcarriers // 2
    level = PLATEAU_FRACTION * metric[peak]
    last = peak
    while last + 1 < len(metric) and metric[last + 1] >= level:
        last += 1
    edge = 2 * math.ceil((1 - math.sqrt(PLATEAU_FRACTION)) * half) + 1
    guard = DEFAULT_RESAMPLER.half_width
    lo = max(0, last - config.cp_length)
    hi = last - edge
    if hi - lo > 2 * guard:
        lo, hi = lo + guard, hi - guard
    if hi < lo:
        return np.array([peak])
    return np.arange(lo, hi + 1)


def coarse_cfo_per_channel(
    rx: np.ndarray, config: OfdmConfig, threshold: float = PLATEAU_THRESHOLD
) -> float:
    """Schmidl-Cox coarse CFO of one receive channel.

    Only timing windows inside the preamble's periodic region contribute, so
    a noiseless channel without frequency offset yields zero.

    Returns:
        float: CFO in Hz, unambiguous within half the repetition frequency.

    Raises:
        PreambleNotFoundError: If the timing metric never exceeds ``threshold``.
    """
    half = config.num_subcarriers // 2
    correlation, _, metric = timing_metric(rx, half)
    peak = int(np.argmax(metric))
    if metric[peak] < threshold:
        raise PreambleNotFoundError(
            f"Timing metric peak {metric[peak]:.3f} below threshold {threshold}"
        )
    windows = _periodic_windows(metric, peak, config)
    angle = np.angle(np.sum(correlation[windows]))
    cfo = float(angle / (2 * np.pi * half * config.sampling_period))
    logger.debug("Coarse CFO %.1f Hz from %d periodic windows", cfo, len(windows))
    return cfo


def _parabolic_offset(values: np.ndarray, peak: int) -> float:
    if peak == 0 or peak == len(values) - 1:
        return 0.0
    left, centre, right = values[peak - 1], values[peak], values[peak + 1]
    denominator = left - 2 * centre + right
    if denominator == 0:
        return 0.0
    return float(0.5 * (left - right) / denominator)


def sto_sample_index(
    rx: np.ndarray, preamble: np.ndarray, threshold_db: float = STO_PEAK_THRESHOLD_DB
) -> int:
    """Integer frame-start index, rounded toward the earlier sample."""
    correlation = np.abs(signal.correlate(rx, preamble, mode="valid"))
    if len(correlation) == 0:
        raise SyncFailureError("Received sequence is shorter than the preamble")
    peak = int(np.argmax(correlation))
    power = correlation**2
    floor = float(np.median(power))
    if floor > 0 and 10 * math.log10(power[peak] / floor) < threshold_db:
        raise SyncFailureError(
            f"Preamble correlation peak only "
            f"{10 * math.log10(power[peak] / floor):.1f} dB above the floor"
        )
    if power[peak] == 0:
        raise SyncFailureError("Received sequence carries no energy")
    refined = peak + _parabolic_offset(correlation, peak)
    return max(0, math.floor(refined + _FLOOR_GUARD))


def sto_per_channel(
    rx: np.ndarray,
    preamble: np.ndarray,
    sampling_period: float,
    threshold_db: float = STO_PEAK_THRESHOLD_DB,
) -> float:
    """Frame start of one channel from cross-correlation with the full preamble.

    Returns:
        float: Start in seconds, an integer number of samples.

    Raises:
        SyncFailureError: If the peak is less than ``threshold_db`` above the
            median correlation power.
    """
    return sto_sample_index(rx, preamble, threshold_db) * sampling_period


def pilot_values(frame: FrameGrid, config: OfdmConfig) -> np.ndarray:
    """Known pilot symbols as an (N_pil x M_pil) array in FFT order."""
    symbols = FrameBuilder(config, frame.seed).pilot_symbols()
    return symbols.reshape(config.num_pilot_subcarriers, config.num_pilot_symbols)


def pilot_estimates(frame: FrameGrid, config: OfdmConfig) -> np.ndarray:
    """Least-squares channel at the pilot cells, (N_pil x M_pil)."""
    cells = frame.cells[:: config.pilot_subcarrier_spacing, :: config.pilot_symbol_spacing]
    return cells / pilot_values(frame, config)


def pilot_subcarrier_offsets(config: OfdmConfig) -> np.ndarray:
    return config.subcarrier_offsets[:: config.pilot_subcarrier_spacing]


def inner_band(offsets: np.ndarray, num_subcarriers: int) -> np.ndarray:
    return np.abs(offsets) <= INNER_BAND_FRACTION * num_subcarriers / 2


def weighted_slope(x: np.ndarray, phases: np.ndarray, weights: np.ndarray) -> float:
    """Weighted least-squares slope of ``phases`` against ``x``."""
    slope, _ = np.polyfit(x, phases, 1, w=np.sqrt(np.maximum(weights, 0.0)))
    return float(slope)


def _lagged_products(estimates: np.ndarray, lag: int) -> np.ndarray:
    return np.sum(estimates[:, lag:] * np.conj(estimates[:, :-lag]), axis=1)


def sfo_per_channel(frame: FrameGrid, config: OfdmConfig) -> float:
    """Normalized SFO from the drift of the pilot phase slope across symbols.

    A clock offset delta advances symbol m by delta times its start sample,
    adding a phase ramp over subcarriers that grows linearly with m. The slope
    between adjacent pilot symbols removes ambiguity, the slope over half the
    frame refines it.

    Raises:
        InsufficientPilotsError: If fewer than two pilot symbols exist.
    """
    if config.num_pilot_symbols < 2:
        raise InsufficientPilotsError("SFO estimation needs at least two pilot symbols")
    estimates = pilot_estimates(frame, config)
    offsets = pilot_subcarrier_offsets(config)
    band = inner_band(offsets, config.num_subcarriers)
    if np.count_nonzero(band) < 2:
        raise InsufficientPilotsError("SFO estimation needs at least two pilot subcarriers")
    x = offsets[band]

    def drift(lag: int, predicted: float) -> float:
        products = _lagged_products(estimates, lag)[band]
        products = products * np.exp(-1j * predicted * x)
        return predicted + weighted_slope(x, np.angle(products), np.abs(products))

    short_lag = 1
    short_slope = drift(short_lag, 0.0)
    long_lag = max(short_lag, config.num_pilot_symbols // 2)
    long_slope = drift(long_lag, short_slope * long_lag / short_lag)

    symbols = long_lag * config.pilot_symbol_spacing
    sfo = long_slope * config.num_subcarriers / (2 * np.pi * symbols * config.symbol_length)
    logger.debug("SFO estimate %.4f ppm", sfo * 1e6)
    return float(sfo)
