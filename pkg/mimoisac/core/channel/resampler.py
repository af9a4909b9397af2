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

import numpy as np


class FractionalResampler:
    """Kaiser-windowed sinc interpolator evaluating a sequence at real positions.

    Samples outside the input are zero. Integer positions are taken directly.

    Arguments:
        num_taps: Odd number of input samples combined per output sample.
        beta: Kaiser window shape parameter.
        block_size: Output samples processed per vectorized block.
    """

    def __init__(self, num_taps: int = 31, beta: float = 8.0, block_size: int = 65536):
        if num_taps < 1 or num_taps % 2 == 0:
            raise ValueError(f"num_taps must be odd and positive, got {num_taps}")
        self.num_taps = num_taps
        self.beta = beta
        self.block_size = block_size
        self.half_width = num_taps // 2
        self._offsets = np.arange(-self.half_width, self.half_width + 1)
        self._window_half_length = self.half_width + 1.0

    def kernel(self, t: np.ndarray) -> np.ndarray:
        ratio = np.clip(t / self._window_half_length, -1.0, 1.0)
        window = np.i0(self.beta * np.sqrt(1.0 - ratio**2)) / np.i0(self.beta)
        return np.sinc(t) * window

    def __call__(self, x: np.ndarray, positions: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        positions = np.asarray(positions, dtype=float)
        nearest = np.rint(positions)
        if np.all(positions == nearest):
            return self._gather(x, nearest.astype(np.int64))

        out = np.empty(positions.shape, dtype=np.result_type(x.dtype, np.complex128))
        for start in range(0, len(positions), self.block_size):
            block = positions[start : start + self.block_size]
            centre = np.rint(block).astype(np.int64)
            index = centre[:, None] + self._offsets[None, :]
            weights = self.kernel(block[:, None] - index)
            valid = (index >= 0) & (index < len(x))
            samples = x[np.clip(index, 0, max(len(x) - 1, 0))] * valid
            out[start : start + self.block_size] = np.sum(samples * weights, axis=1)
        return out

    @staticmethod
    def _gather(x: np.ndarray, index: np.ndarray) -> np.ndarray:
        valid = (index >= 0) & (index < len(x))
        out = np.zeros(index.shape, dtype=np.result_type(x.dtype, np.complex128))
        out[valid] = x[index[valid]]
        return out


DEFAULT_RESAMPLER = FractionalResampler()


def delay_signal(
    x: np.ndarray, delay_samples: float, length: int | None = None
) -> np.ndarray:
    """Return ``x`` delayed by a possibly fractional number of samples."""
    length = len(x) if length is None else length
    positions = np.arange(length) - delay_samples
    return DEFAULT_RESAMPLER(x, positions)
