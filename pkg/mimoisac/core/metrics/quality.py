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
from enum import Enum
import logging

import numpy as np
from scipy.stats import circstd

from mimoisac.constants import DB_CEILING, DB_FLOOR
from mimoisac.core.channel.hardware import RAYLEIGH_STD_FACTOR
from mimoisac.core.errors import DimensionError, MimoIsacError
from mimoisac.core.waveform import FrameGrid


logger = logging.getLogger(__name__)

DEFAULT_MAINLOBE_WIDTH = 2


class MetricError(MimoIsacError):
    """A metric is undefined for the given input."""


class NoPeakError(MetricError):
    """The profile has no unique global peak."""


def power_db(ratio: float) -> float:
    """10 log10 of a power ratio, clamped to the reportable range."""
    if ratio <= 0:
        return DB_FLOOR
    if not np.isfinite(ratio):
        return DB_CEILING
    return float(np.clip(10 * np.log10(ratio), DB_FLOOR, DB_CEILING))


@dataclass(frozen=True)
class EvmResult:
    """EVM in dB over data cells and its standard deviation across subcarriers."""

    mean_db: float
    spread_db: float


def evm(frame: FrameGrid, reference: FrameGrid) -> EvmResult:
    """Error vector magnitude of an equalized frame against the transmitted one.

    Only data cells count; pilots and erased cells are excluded.
    """
    if frame.cells.shape != reference.cells.shape:
        raise DimensionError(f"Frame {frame.cells.shape} and reference {reference.cells.shape} differ")
    data = ~reference.pilot_mask
    if frame.erased is not None:
        data &= ~frame.erased
    error_power = np.where(data, np.abs(frame.cells - reference.cells) ** 2, 0.0)
    reference_power = np.where(data, np.abs(reference.cells) ** 2, 0.0)
    total = float(np.sum(reference_power))
    if total == 0:
        raise MetricError("Reference frame has no data power")
    mean_db = power_db(float(np.sum(error_power)) / total)

    per_subcarrier = []
    for error_row, reference_row in zip(error_power, reference_power):
        if np.any(reference_row):
            per_subcarrier.append(power_db(error_row.sum() / reference_row.sum()))
    spread_db = float(np.std(per_subcarrier)) if per_subcarrier else 0.0
    return EvmResult(mean_db=mean_db, spread_db=spread_db)


def bit_error_rate(bits: np.ndarray, reference: np.ndarray) -> float:
    bits = np.asarray(bits).reshape(-1)
    reference = np.asarray(reference).reshape(-1)
    if bits.shape != reference.shape:
        raise DimensionError(f"{bits.size} bits against {reference.size} reference bits")
    if bits.size == 0:
        return 0.0
    return float(np.count_nonzero(bits != reference) / bits.size)


@dataclass(frozen=True)
class SidelobeMetrics:
    """Sidelobe levels of a 1-D cut.

    Attributes:
        pslr_db: Highest sidelobe power over peak power.
        islr_db: Power outside the mainlobe over power inside it.
        peak_index: Peak bin in the input profile.
        mainlobe: First and last mainlobe bins, relative to the peak.
    """

    pslr_db: float
    islr_db: float
    peak_index: int
    mainlobe: tuple[int, int]


def _first_minimum(power: np.ndarray, peak: int, step: int) -> int | None:
    index = peak
    while 0 <= index + step < len(power):
        if power[index + step] >= power[index]:
            return index
        index += step
    return None


def peak_sidelobe_metrics(
    cut: np.ndarray,
    mainlobe_width: int = DEFAULT_MAINLOBE_WIDTH,
    circular: bool = False,
) -> SidelobeMetrics:
    """PSLR and ISLR of a magnitude profile.

    The mainlobe extends from the peak to the first local minimum on each
    side, falling back to mainlobe_width bins where no minimum exists
    before the edge. circular treats the profile as periodic, as for a
    range profile whose peak sits at bin 0.

    Raises:
        NoPeakError: If the global maximum is zero or not unique.
    """
    power = np.abs(np.asarray(cut, dtype=complex).reshape(-1)) ** 2
    if power.size == 0:
        raise NoPeakError("Empty profile")
    peak = int(np.argmax(power))
    peak_power = power[peak]
    if peak_power <= 0 or np.count_nonzero(np.isclose(power, peak_power, rtol=1e-9, atol=0)) > 1:
        raise NoPeakError("Profile has no unique peak")

    shift = 0
    if circular:
        shift = len(power) // 2 - peak
        power = np.roll(power, shift)
    center = peak + shift

    left = _first_minimum(power, center, -1)
    right = _first_minimum(power, center, 1)
    if left is None:
        left = max(0, center - mainlobe_width)
    if right is None:
        right = min(len(power) - 1, center + mainlobe_width)

    inside = np.zeros(len(power), dtype=bool)
    inside[left : right + 1] = True
    sidelobes = power[~inside]
    if sidelobes.size == 0:
        pslr = islr = DB_FLOOR
    else:
        pslr = power_db(float(sidelobes.max()) / peak_power)
        islr = power_db(float(sidelobes.sum()) / float(power[inside].sum()))
    return SidelobeMetrics(
        pslr_db=pslr, islr_db=islr, peak_index=peak, mainlobe=(left - center, right - center)
    )


def pplr(image_peak: float, reference_peak: float) -> float:
    """Peak power loss of an image against the mismatch-free reference, in dB."""
    if reference_peak <= 0:
        raise MetricError(f"Reference peak power must be positive, got {reference_peak}")
    return power_db(image_peak / reference_peak)


def _circular_distance(size: int, index: int) -> np.ndarray:
    distance = np.abs(np.arange(size) - index)
    return np.minimum(distance, size - distance)


def mean_image_sir(
    cut: np.ndarray, target_cell: tuple[int, int], guard: tuple[int, int] = (0, 0)
) -> float:
    """Target power over the mean power of the cut outside the target's guard, in dB.

    ``guard`` holds circular half-widths (rows, columns) of the region around
    the target left out of the interference mean; (0, 0) excludes the target
    cell only.
    """
    power = np.abs(np.asarray(cut)) ** 2
    if power.ndim != 2 or power.size < 2:
        raise MetricError(f"Degenerate image of shape {power.shape}")
    row, column = target_cell
    if not (0 <= row < power.shape[0] and 0 <= column < power.shape[1]):
        raise MetricError(f"Target cell {target_cell} outside image {power.shape}")
    target = power[row, column]
    if target <= 0:
        raise MetricError("Target cell has zero power")
    near_row, near_column = (
        _circular_distance(size, index) <= half
        for size, index, half in zip(power.shape, target_cell, guard)
    )
    outside = ~(near_row[:, None] & near_column[None, :])
    if not outside.any():
        raise MetricError(f"Guard {guard} covers the whole image {power.shape}")
    rest = float(np.mean(power[outside]))
    if rest <= 0:
        return DB_CEILING
    return power_db(target / rest)


class PhaseMapping(str, Enum):
    # 2 pi f_IF sigma_tau
    UNWRAPPED = "unwrapped"
    # standard deviation of the phases wrapped into [-pi, pi)
    WRAPPED = "wrapped"
    CIRCULAR = "circular"


def delay_to_phase_std(
    sigma_tau: float,
    f_if: float,
    mapping: PhaseMapping | str = PhaseMapping.UNWRAPPED,
    num_samples: int = 100_000,
    seed: int = 0,
) -> float:
    """Standard deviation in radians of the IF phase caused by a delay mismatch.

    The wrapped and circular variants draw Rayleigh delays with standard
    deviation sigma_tau and measure the resulting phases. The wrapped
    value saturates at pi / sqrt(3) for large delays.
    """
    if sigma_tau < 0 or f_if < 0:
        raise MetricError("sigma_tau and f_if must be non-negative")
    mapping = PhaseMapping(mapping)
    if mapping is PhaseMapping.UNWRAPPED or sigma_tau == 0 or f_if == 0:
        return float(2 * np.pi * f_if * sigma_tau)

    rng = np.random.default_rng(seed)
    delays = rng.rayleigh(sigma_tau / RAYLEIGH_STD_FACTOR, size=num_samples)
    phases = 2 * np.pi * f_if * delays
    if mapping is PhaseMapping.CIRCULAR:
        return float(circstd(phases, high=np.pi, low=-np.pi))
    wrapped = np.mod(phases + np.pi, 2 * np.pi) - np.pi
    return float(np.std(wrapped))
