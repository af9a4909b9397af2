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

import numpy as np

from mimoisac.core.comm.estimation import CommCfr
from mimoisac.core.errors import DimensionError
from mimoisac.core.waveform import FrameGrid


logger = logging.getLogger(__name__)


def zf_equalize(frame: FrameGrid, cfr: CommCfr) -> FrameGrid:
    """Cellwise Y / H; cells with H = 0 are erased and set to zero."""
    if frame.cells.shape != cfr.shape:
        raise DimensionError(f"Frame {frame.cells.shape} and CFR {cfr.shape} differ")
    erased = cfr.cells == 0
    safe = np.where(erased, 1.0, cfr.cells)
    cells = np.where(erased, 0.0, frame.cells / safe)
    if np.any(erased):
        logger.debug("ZF erased %d cells", np.count_nonzero(erased))
    return frame.with_cells(cells, erased=erased)


def mrc_combine(frames: list[FrameGrid], cfrs: list[CommCfr]) -> FrameGrid:
    """Maximum-ratio combining sum(Y conj(H)) / sum(|H|^2) over channels.

    Cells where every channel has H = 0 are erased and set to zero.
    """
    if not frames:
        raise DimensionError("MRC needs at least one channel")
    if len(frames) != len(cfrs):
        raise DimensionError(f"{len(frames)} frames but {len(cfrs)} CFRs")
    shape = frames[0].cells.shape
    if any(f.cells.shape != shape for f in frames) or any(c.shape != shape for c in cfrs):
        raise DimensionError("All frames and CFRs must share one shape")

    received = np.stack([frame.cells for frame in frames])
    channels = np.stack([cfr.cells for cfr in cfrs])
    numerator = np.sum(received * np.conj(channels), axis=0)
    denominator = np.sum(np.abs(channels) ** 2, axis=0)
    erased = denominator == 0
    cells = np.where(erased, 0.0, numerator / np.where(erased, 1.0, denominator))
    return frames[0].with_cells(cells, erased=erased)
