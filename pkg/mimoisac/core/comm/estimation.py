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
from scipy.interpolate import RegularGridInterpolator

from mimoisac.core.errors import DimensionError, MimoIsacError
from mimoisac.core.waveform import FrameGrid, OfdmConfig


logger = logging.getLogger(__name__)


class DegeneratePilotError(MimoIsacError):
    """A pilot cell was transmitted with zero amplitude."""


@dataclass(frozen=True)
class CommCfr:
    """Interpolated communication CFR of one receive channel, N x M in FFT order."""

    cells: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape


def estimate_cfr(frame: FrameGrid, pilots: np.ndarray, config: OfdmConfig) -> CommCfr:
    """LS channel estimate at the pilots, bilinearly interpolated to every cell.

    Interpolation runs on the signed-frequency axis so that the band edges meet
    in the middle of the FFT order. Cells beyond the outermost pilots hold the
    nearest pilot value.

    Arguments:
        frame: Received grid Y.
        pilots: (N_pil x M_pil) transmitted pilot values.
        config: OFDM parameters.

    Raises:
        DegeneratePilotError: If a pilot value is zero.
    """
    pilots = np.asarray(pilots)
    expected = (config.num_pilot_subcarriers, config.num_pilot_symbols)
    if pilots.shape != expected:
        raise DimensionError(f"Pilot array {pilots.shape} does not match {expected}")
    zeros = np.argwhere(pilots == 0)
    if len(zeros):
        row, column = zeros[0]
        raise DegeneratePilotError(
            f"Pilot at subcarrier {row * config.pilot_subcarrier_spacing}, symbol "
            f"{column * config.pilot_symbol_spacing} has zero amplitude"
        )
    received = frame.cells[:: config.pilot_subcarrier_spacing, :: config.pilot_symbol_spacing]
    least_squares = received / pilots

    pilot_offsets = config.subcarrier_offsets[:: config.pilot_subcarrier_spacing]
    order = np.argsort(pilot_offsets)
    pilot_symbols = np.arange(0, config.num_symbols, config.pilot_symbol_spacing)

    offsets = np.clip(config.subcarrier_offsets, pilot_offsets.min(), pilot_offsets.max())
    symbols = np.clip(np.arange(config.num_symbols), pilot_symbols[0], pilot_symbols[-1])
    if len(pilot_symbols) == 1:
        cells = np.repeat(
            np.interp(offsets, pilot_offsets[order], least_squares[order, 0].real)[:, None]
            + 1j * np.interp(offsets, pilot_offsets[order], least_squares[order, 0].imag)[:, None],
            config.num_symbols,
            axis=1,
        )
        return CommCfr(cells=cells)

    interpolator = RegularGridInterpolator(
        (pilot_offsets[order], pilot_symbols), least_squares[order], method="linear"
    )
    grid_offsets, grid_symbols = np.meshgrid(offsets, symbols, indexing="ij")
    cells = interpolator(np.stack([grid_offsets, grid_symbols], axis=-1))
    return CommCfr(cells=cells)
