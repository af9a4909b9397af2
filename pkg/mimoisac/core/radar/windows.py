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

import numpy as np
from scipy.signal import windows

from mimoisac.core.errors import ConfigurationError


class WindowKind(str, Enum):
    RECTANGULAR = "rectangular"
    CHEBYSHEV = "chebyshev"


@dataclass(frozen=True)
class Window:
    """Unit-peak taper in natural (ascending index) order."""

    kind: WindowKind
    coefficients: np.ndarray
    sidelobe_db: float | None = None

    def __len__(self) -> int:
        return len(self.coefficients)

    @property
    def coherent_gain(self) -> float:
        return float(np.sum(self.coefficients))

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "length": len(self), "sidelobe_db": self.sidelobe_db}


def make_window(
    kind: WindowKind | str, length: int, sidelobe_db: float | None = 100.0
) -> Window:
    """Build a rectangular or Dolph-Chebyshev window normalized to unit peak.

    Raises:
        ConfigurationError: For a non-positive length or sidelobe level.
    """
    kind = WindowKind(kind)
    if length < 1:
        raise ConfigurationError(f"Window length must be positive, got {length}")
    if kind is WindowKind.RECTANGULAR:
        return Window(kind=kind, coefficients=np.ones(length))
    if sidelobe_db is None or sidelobe_db <= 0:
        raise ConfigurationError(
            f"Chebyshev windows need a positive sidelobe level, got {sidelobe_db}"
        )
    coefficients = windows.chebwin(length, at=sidelobe_db, sym=True)
    coefficients = coefficients / np.max(coefficients)
    return Window(kind=kind, coefficients=coefficients, sidelobe_db=float(sidelobe_db))


def mainlobe_half_width(window: Window, transform_length: int) -> int:
    """Cells from the peak to the first null of the window's response.

    The response is sampled on ``transform_length`` points over one period,
    matching a range axis zero-padded to that length or an azimuth grid of
    that many cells uniform in sine.
    """
    if transform_length < len(window):
        raise ConfigurationError(
            f"Transform length {transform_length} shorter than the window ({len(window)})"
        )
    response = np.abs(np.fft.fft(window.coefficients, transform_length))
    rising = np.flatnonzero(np.diff(response[: transform_length // 2 + 1]) > 0)
    return int(rising[0]) if len(rising) else transform_length // 2
