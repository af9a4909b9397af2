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

from dataclasses import dataclass, field
import logging

import numpy as np

from mimoisac.constants import SPEED_OF_LIGHT
from mimoisac.core.array import UlaGeometry, steering_matrix
from mimoisac.core.errors import DimensionError
from mimoisac.core.radar.windows import Window, WindowKind, make_window
from mimoisac.core.waveform import CalibrationError, FrameGrid


logger = logging.getLogger(__name__)

ABE_FLOOR = 1e-3


@dataclass(frozen=True)
class RadarCfr:
    """Calibrated radar CFRs D, (channels x N x M) in FFT subcarrier order.

    Attributes:
        cells: Y / (|H_ABE| X_hat) per channel; masked cells are zero.
        masked: Cells excluded because X_hat is zero there.
        subcarrier_spacing: Hz.
        symbol_duration: Seconds, CP included.
    """

    cells: np.ndarray
    masked: np.ndarray
    subcarrier_spacing: float
    symbol_duration: float

    @property
    def num_channels(self) -> int:
        return self.cells.shape[0]

    @property
    def num_masked(self) -> int:
        return int(np.count_nonzero(self.masked))

    @property
    def bandwidth(self) -> float:
        return self.cells.shape[1] * self.subcarrier_spacing


@dataclass(frozen=True)
class RadarCube:
    """Range-Doppler-azimuth image.

    Attributes:
        values: (range x Doppler x azimuth) complex image.
        ranges: Relative bistatic range of each range bin in meters.
        dopplers: Doppler shift of each Doppler bin in Hz (FFT order).
        azimuths: DoA of each azimuth bin in radians.
        windows: Window description per axis.
    """

    values: np.ndarray
    ranges: np.ndarray
    dopplers: np.ndarray
    azimuths: np.ndarray
    windows: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        expected = (len(self.ranges), len(self.dopplers), len(self.azimuths))
        if self.values.shape != expected:
            raise DimensionError(f"Cube {self.values.shape} does not match axes {expected}")

    def peak_index(self) -> tuple[int, int, int]:
        return tuple(int(i) for i in np.unravel_index(np.argmax(np.abs(self.values)), self.values.shape))


def build_radar_cfr(
    frames: list[FrameGrid],
    xhat: FrameGrid,
    abe_cfr: np.ndarray | None = None,
    floor: float = ABE_FLOOR,
) -> RadarCfr:
    """Divide each channel by the frame estimate and the ABE magnitude.

    Only |H_ABE| is divided out so that back-end phase stays in the image.

    Arguments:
        frames: Received grids Y, one per channel.
        xhat: Transmit-frame estimate.
        abe_cfr: (channels x N) back-end CFRs; ideal when None.
        floor: Minimum |H_ABE| relative to its peak.

    Raises:
        CalibrationError: If |H_ABE| drops below ``floor`` times its peak.
    """
    if not frames:
        raise DimensionError("Radar processing needs at least one channel")
    received = np.stack([frame.cells for frame in frames])
    if received.shape[1:] != xhat.cells.shape:
        raise DimensionError(f"Frames {received.shape[1:]} and X_hat {xhat.cells.shape} differ")

    if abe_cfr is None:
        magnitude = np.ones(received.shape[:2])
    else:
        magnitude = np.abs(np.atleast_2d(abe_cfr))
        if magnitude.shape != received.shape[:2]:
            raise DimensionError(
                f"ABE CFR {magnitude.shape} does not match {received.shape[:2]}"
            )
        peak = magnitude.max(axis=1, keepdims=True)
        weak = magnitude < floor * peak
        if np.any(weak):
            channel, bin_index = np.argwhere(weak)[0]
            raise CalibrationError(int(channel), int(bin_index), float(magnitude[channel, bin_index]))

    masked = xhat.cells == 0
    divisor = magnitude[:, :, None] * np.where(masked, 1.0, xhat.cells)[None, :, :]
    cells = np.where(masked[None, :, :], 0.0, received / divisor)
    if np.any(masked):
        logger.debug("Masked %d radar cells with zero X_hat", np.count_nonzero(masked))
    return RadarCfr(
        cells=cells,
        masked=masked,
        subcarrier_spacing=xhat.subcarrier_spacing,
        symbol_duration=xhat.symbol_duration,
    )


def _frequency_taper(window: Window) -> np.ndarray:
    return np.fft.ifftshift(window.coefficients)


def range_doppler_image(
    d: np.ndarray,
    window_range: Window,
    window_doppler: Window,
    notch_zero_range: bool = False,
) -> np.ndarray:
    """Periodogram of one channel: windowed IDFT over subcarriers, DFT over symbols.

    Both transforms are unnormalized, so a unit CFR peaks at N M with
    rectangular windows. Range bin k is the delay k / B, Doppler bin q is
    q / (M T_sym) in FFT order.
    """
    d = np.asarray(d)
    if d.ndim != 2:
        raise DimensionError(f"Expected an N x M CFR, got shape {d.shape}")
    num_subcarriers, num_symbols = d.shape
    if len(window_range) != num_subcarriers or len(window_doppler) != num_symbols:
        raise DimensionError("Window lengths do not match the CFR dimensions")
    tapered = d * _frequency_taper(window_range)[:, None] * window_doppler.coefficients[None, :]
    profile = num_subcarriers * np.fft.ifft(tapered, axis=0)
    image = np.fft.fft(profile, axis=1)
    if notch_zero_range:
        image[0, :] = 0
    return image


def range_axis(num_bins: int, bandwidth: float, oversampling: int = 1) -> np.ndarray:
    return np.arange(num_bins) * SPEED_OF_LIGHT / (bandwidth * oversampling)


def doppler_axis(num_symbols: int, symbol_duration: float) -> np.ndarray:
    return np.fft.fftfreq(num_symbols, d=symbol_duration)


def doa_cube(
    images: np.ndarray,
    geometry: UlaGeometry,
    azimuth_grid: np.ndarray,
    window_az: Window,
    bandwidth: float,
    symbol_duration: float,
    extra_windows: dict | None = None,
) -> RadarCube:
    """Fourier beamforming of per-channel range-Doppler images over ``azimuth_grid``.

    Arguments:
        images: (channels x N x M) complex images.
        geometry: Receive array, one element per channel.
        azimuth_grid: DoAs to evaluate in radians.
        window_az: Taper across channels.
        bandwidth: Signal bandwidth for the range axis.
        symbol_duration: OFDM symbol duration for the Doppler axis.
        extra_windows: Range and Doppler window metadata to record.
    """
    images = np.asarray(images)
    if images.ndim != 3:
        raise DimensionError(f"Expected channels x N x M images, got {images.shape}")
    if images.shape[0] != geometry.num_elements or len(window_az) != images.shape[0]:
        raise DimensionError(
            f"{images.shape[0]} channel images for {geometry.num_elements} elements "
            f"and a {len(window_az)}-tap azimuth window"
        )
    steering = steering_matrix(geometry, azimuth_grid, receive=True)
    weighted = steering * window_az.coefficients[None, :]
    values = np.einsum("cnm,sc->nms", images, weighted)
    windows = dict(extra_windows or {})
    windows["azimuth"] = window_az.to_dict()
    return RadarCube(
        values=values,
        ranges=range_axis(images.shape[1], bandwidth),
        dopplers=doppler_axis(images.shape[2], symbol_duration),
        azimuths=np.asarray(azimuth_grid, dtype=float),
        windows=windows,
    )


@dataclass(frozen=True)
class RangeAzimuthCut:
    """Zero-Doppler range-azimuth image, (range x azimuth)."""

    values: np.ndarray
    ranges: np.ndarray
    azimuths: np.ndarray
    oversampling: int = 1


def zero_doppler_cut(
    radar_cfr: RadarCfr,
    geometry: UlaGeometry,
    azimuth_grid: np.ndarray,
    window_range: Window,
    window_doppler: Window,
    window_az: Window,
    range_oversampling: int = 1,
) -> RangeAzimuthCut:
    """Zero-Doppler slice of the cube without forming the full cube.

    The Doppler-windowed sum over symbols is transformed to range with
    ``range_oversampling`` times zero padding between the positive and
    negative subcarriers, then beamformed. With no oversampling it equals
    ``doa_cube(...).values[:, 0, :]``.
    """
    if range_oversampling < 1:
        raise DimensionError("range_oversampling must be at least 1")
    cells = radar_cfr.cells
    num_channels, num_subcarriers, num_symbols = cells.shape
    if len(window_range) != num_subcarriers or len(window_doppler) != num_symbols:
        raise DimensionError("Window lengths do not match the CFR dimensions")
    spectrum = np.einsum("cnm,m->cn", cells, window_doppler.coefficients)
    spectrum = spectrum * _frequency_taper(window_range)[None, :]

    padded_length = num_subcarriers * range_oversampling
    half = num_subcarriers // 2
    padded = np.zeros((num_channels, padded_length), dtype=complex)
    padded[:, :half] = spectrum[:, :half]
    padded[:, padded_length - (num_subcarriers - half) :] = spectrum[:, half:]
    profiles = padded_length * np.fft.ifft(padded, axis=1)

    if num_channels != geometry.num_elements or len(window_az) != num_channels:
        raise DimensionError("Channel count does not match the array or azimuth window")
    steering = steering_matrix(geometry, azimuth_grid, receive=True)
    values = profiles.T @ (steering * window_az.coefficients[None, :]).T
    return RangeAzimuthCut(
        values=values,
        ranges=range_axis(padded_length, radar_cfr.bandwidth, range_oversampling),
        azimuths=np.asarray(azimuth_grid, dtype=float),
        oversampling=range_oversampling,
    )


def default_windows(
    kind: WindowKind | str,
    num_subcarriers: int,
    num_symbols: int,
    num_channels: int,
    sidelobe_db: float = 100.0,
) -> tuple[Window, Window, Window]:
    """Range, Doppler and azimuth windows of one kind."""
    return (
        make_window(kind, num_subcarriers, sidelobe_db),
        make_window(kind, num_symbols, sidelobe_db),
        make_window(kind, num_channels, sidelobe_db),
    )
