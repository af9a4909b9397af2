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

from mimoisac.core.array import SteeringVector
from mimoisac.core.errors import DimensionError, MimoIsacError
from mimoisac.core.waveform.config import OfdmConfig
from mimoisac.core.waveform.frame import FrameGrid, random_qpsk


logger = logging.getLogger(__name__)

_PREAMBLE_STREAM = 2
REGULARIZATION = 1e-6


class CalibrationError(MimoIsacError):
    """A front-end response is too weak to be inverted."""

    def __init__(self, channel: int, bin_index: int, magnitude: float) -> None:
        super().__init__(
            f"Channel {channel} response {magnitude:.3e} at bin {bin_index} is "
            "below the pre-distortion floor"
        )
        self.channel = channel
        self.bin_index = bin_index
        self.magnitude = magnitude


def preamble_spectrum(config: OfdmConfig, seed: int = 0) -> np.ndarray:
    """Even-subcarrier QPSK spectrum giving two identical halves in time."""
    n = config.num_subcarriers
    rng = np.random.default_rng([seed, _PREAMBLE_STREAM])
    spectrum = np.zeros(n, dtype=complex)
    # Half the bins are empty; sqrt(2) keeps the symbol power equal to data symbols.
    spectrum[::2] = np.sqrt(2) * random_qpsk(rng, n // 2)
    return spectrum


def add_cyclic_prefix(symbols: np.ndarray, cp_length: int) -> np.ndarray:
    """Prepend the last ``cp_length`` samples of each row."""
    if cp_length == 0:
        return symbols
    return np.concatenate([symbols[..., -cp_length:], symbols], axis=-1)


def build_preamble(config: OfdmConfig, seed: int = 0) -> np.ndarray:
    """Time-domain preamble (CP included) whose two body halves are identical."""
    body = np.fft.ifft(preamble_spectrum(config, seed))
    return add_cyclic_prefix(body, config.cp_length)


def preamble_body(config: OfdmConfig, seed: int = 0) -> np.ndarray:
    return np.fft.ifft(preamble_spectrum(config, seed))


def to_time_domain(frame: FrameGrid, config: OfdmConfig) -> np.ndarray:
    """OFDM-modulate a grid: preamble then M CP-prefixed symbols.

    Returns:
        np.ndarray: (M + 1) (N + N_CP) complex samples.
    """
    if frame.cells.shape != (config.num_subcarriers, config.num_symbols):
        raise DimensionError(
            f"Frame shape {frame.cells.shape} does not match "
            f"({config.num_subcarriers}, {config.num_symbols})"
        )
    symbols = np.fft.ifft(frame.cells, axis=0).T
    payload = add_cyclic_prefix(symbols, config.cp_length).reshape(-1)
    return np.concatenate([build_preamble(config, frame.seed), payload])


def from_time_domain(
    samples: np.ndarray, config: OfdmConfig, start: int = 0
) -> np.ndarray:
    """Strip CPs and FFT the M payload symbols following the preamble at ``start``.

    Returns:
        np.ndarray: N x M grid of received cells.
    """
    length = config.symbol_length
    begin = start + length
    end = begin + config.num_symbols * length
    if start < 0 or end > samples.shape[-1]:
        raise DimensionError(
            f"Frame at {start} needs samples up to {end}, have {samples.shape[-1]}"
        )
    blocks = samples[..., begin:end].reshape(
        *samples.shape[:-1], config.num_symbols, length
    )
    bodies = blocks[..., config.cp_length :]
    return np.swapaxes(np.fft.fft(bodies, axis=-1), -1, -2)


def apply_tx_predistortion(
    time_signal: np.ndarray,
    afe_cfr: np.ndarray,
    config: OfdmConfig,
    floor: float = 1e-3,
) -> np.ndarray:
    """Pre-equalize every transmit channel with the inverse of its AFE response.

    Each OFDM symbol (preamble included) is transformed, multiplied by the
    regularized inverse conj(H) / (|H|^2 + eps) and transformed back with a new
    cyclic prefix. eps is 1e-6 of the peak |H|^2.

    Arguments:
        time_signal: (channels x samples) or a single stream broadcast to all
            channels.
        afe_cfr: (channels x N) AFE frequency responses in FFT order.
        config: OFDM parameters giving the symbol framing.
        floor: Minimum |H| relative to its peak.

    Returns:
        np.ndarray: (channels x samples) pre-distorted signal.

    Raises:
        CalibrationError: If some |H| is below ``floor`` times its peak.
    """
    cfr = np.atleast_2d(afe_cfr)
    if cfr.shape[1] != config.num_subcarriers:
        raise DimensionError(
            f"AFE response has {cfr.shape[1]} bins, expected {config.num_subcarriers}"
        )
    signal = np.atleast_2d(time_signal)
    if signal.shape[0] == 1 and cfr.shape[0] > 1:
        signal = np.broadcast_to(signal, (cfr.shape[0], signal.shape[1]))
    if signal.shape[0] != cfr.shape[0]:
        raise DimensionError(
            f"{signal.shape[0]} signal channels but {cfr.shape[0]} AFE responses"
        )
    length = config.symbol_length
    if signal.shape[1] % length:
        raise DimensionError(
            f"Signal length {signal.shape[1]} is not a multiple of {length}"
        )

    magnitude = np.abs(cfr)
    peak = magnitude.max(axis=1, keepdims=True)
    weak = magnitude < floor * peak
    if np.any(weak):
        channel, bin_index = np.argwhere(weak)[0]
        raise CalibrationError(int(channel), int(bin_index), float(magnitude[channel, bin_index]))

    eps = REGULARIZATION * peak**2
    inverse = np.conj(cfr) / (magnitude**2 + eps)

    blocks = signal.reshape(signal.shape[0], -1, length)[..., config.cp_length :]
    spectra = np.fft.fft(blocks, axis=-1) * inverse[:, None, :]
    bodies = np.fft.ifft(spectra, axis=-1)
    logger.debug("Pre-distorted %d channels", signal.shape[0])
    return add_cyclic_prefix(bodies, config.cp_length).reshape(signal.shape[0], -1)


def apply_tx_beamforming(
    time_signal: np.ndarray, steering_vectors: list[SteeringVector]
) -> np.ndarray:
    """Weight one stream onto the array by the sum of the given steering vectors.

    Returns:
        np.ndarray: (elements x samples) per-element signals.
    """
    if not steering_vectors:
        raise DimensionError("At least one steering vector is required")
    sizes = {vector.num_elements for vector in steering_vectors}
    if len(sizes) != 1:
        raise DimensionError(f"Steering vectors of different sizes {sorted(sizes)}")
    weights = np.sum([vector.weights for vector in steering_vectors], axis=0)
    return weights[:, None] * np.asarray(time_signal)[None, :]
