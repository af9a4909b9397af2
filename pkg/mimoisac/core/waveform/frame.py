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

from mimoisac.core.errors import DimensionError, MimoIsacError
from mimoisac.core.waveform.coding import LdpcCode, Uncoded, make_channel_code
from mimoisac.core.waveform.config import OfdmConfig


logger = logging.getLogger(__name__)

_PILOT_STREAM = 0
_FILLER_STREAM = 1


class CapacityError(MimoIsacError):
    """Payload does not fit into the data cells of one frame."""

    def __init__(self, requested_bits: int, capacity_bits: int) -> None:
        super().__init__(
            f"Payload of {requested_bits} bits exceeds frame capacity of "
            f"{capacity_bits} bits"
        )
        self.requested_bits = requested_bits
        self.capacity_bits = capacity_bits


def qpsk_map(bits: np.ndarray) -> np.ndarray:
    """Gray-map bit pairs (b0, b1) to ((1 - 2 b0) + i (1 - 2 b1)) / sqrt(2)."""
    bits = np.asarray(bits, dtype=np.int64).reshape(-1)
    if len(bits) % 2:
        raise DimensionError("QPSK needs an even number of bits")
    pairs = bits.reshape(-1, 2)
    return ((1 - 2 * pairs[:, 0]) + 1j * (1 - 2 * pairs[:, 1])) / np.sqrt(2)


def qpsk_llr(symbols: np.ndarray, noise_variance: float) -> np.ndarray:
    """LLRs log(P0/P1) for Gray QPSK in AWGN, interleaved b0, b1."""
    symbols = np.asarray(symbols).reshape(-1)
    scale = 2 * np.sqrt(2) / max(noise_variance, 1e-12)
    llr = np.empty(2 * len(symbols))
    llr[0::2] = scale * symbols.real
    llr[1::2] = scale * symbols.imag
    return llr


def random_qpsk(rng: np.random.Generator, count: int) -> np.ndarray:
    return qpsk_map(rng.integers(0, 2, size=2 * count))


@dataclass(frozen=True)
class FrameGrid:
    """N x M resource grid in FFT subcarrier order.

    Attributes:
        cells: Complex cell values, subcarriers along axis 0.
        pilot_mask: True for pilot cells.
        subcarrier_spacing: Spacing of axis 0 in Hz.
        symbol_duration: Spacing of axis 1 in seconds (CP included).
        seed: Seed the pilots, filler and preamble were drawn with.
        erased: Cells without a usable value, or None.
    """

    cells: np.ndarray
    pilot_mask: np.ndarray
    subcarrier_spacing: float
    symbol_duration: float
    seed: int = 0
    erased: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.cells.shape != self.pilot_mask.shape:
            raise DimensionError(
                f"Cell grid {self.cells.shape} and pilot mask "
                f"{self.pilot_mask.shape} differ"
            )
        if self.erased is not None and self.erased.shape != self.cells.shape:
            raise DimensionError("Erasure mask does not match the cell grid")

    @property
    def num_subcarriers(self) -> int:
        return self.cells.shape[0]

    @property
    def num_symbols(self) -> int:
        return self.cells.shape[1]

    @property
    def num_erased(self) -> int:
        return 0 if self.erased is None else int(np.count_nonzero(self.erased))

    @property
    def frequencies(self) -> np.ndarray:
        n = self.num_subcarriers
        return np.fft.fftfreq(n) * n * self.subcarrier_spacing

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.num_symbols) * self.symbol_duration

    def with_cells(
        self, cells: np.ndarray, erased: np.ndarray | None = None
    ) -> "FrameGrid":
        return FrameGrid(
            cells=cells,
            pilot_mask=self.pilot_mask,
            subcarrier_spacing=self.subcarrier_spacing,
            symbol_duration=self.symbol_duration,
            seed=self.seed,
            erased=self.erased if erased is None else erased,
        )


class FrameBuilder:
    """Lay out pilots, coded payload and filler on the resource grid.

    Pilot and filler symbols are deterministic in ``seed`` so the receiver can
    regenerate them.
    """

    def __init__(self, config: OfdmConfig, seed: int = 0) -> None:
        self.config = config
        self.seed = seed
        self.code: LdpcCode | Uncoded = make_channel_code(config.code)
        self.pilot_mask = config.pilot_mask()

    @property
    def coded_capacity_bits(self) -> int:
        return self.config.num_data_cells * self.config.modulation.bits_per_symbol

    @property
    def capacity_bits(self) -> int:
        blocks = self.coded_capacity_bits // self.code.n
        return blocks * self.code.k

    def num_blocks(self, num_payload_bits: int) -> int:
        return -(-num_payload_bits // self.code.k)

    def pilot_symbols(self) -> np.ndarray:
        rng = np.random.default_rng([self.seed, _PILOT_STREAM])
        return random_qpsk(rng, self.config.num_pilot_cells)

    def encode_payload(self, payload_bits: np.ndarray) -> np.ndarray:
        """Zero-pad to whole blocks and encode to a (blocks x n) array."""
        payload = np.asarray(payload_bits, dtype=np.uint8).reshape(-1)
        if len(payload) > self.capacity_bits:
            raise CapacityError(len(payload), self.capacity_bits)
        blocks = self.num_blocks(len(payload))
        if blocks == 0:
            return np.zeros((0, self.code.n), dtype=np.uint8)
        padded = np.zeros(blocks * self.code.k, dtype=np.uint8)
        padded[: len(payload)] = payload
        return self.code.encode(padded.reshape(blocks, self.code.k))

    def assemble(self, coded_bits: np.ndarray) -> FrameGrid:
        """Place already coded bits into the data cells and fill the rest."""
        coded = np.asarray(coded_bits, dtype=np.uint8).reshape(-1)
        if len(coded) > self.coded_capacity_bits:
            raise CapacityError(len(coded), self.coded_capacity_bits)
        data = np.empty(self.config.num_data_cells, dtype=complex)
        used = len(coded) // 2
        data[:used] = qpsk_map(coded)
        rng = np.random.default_rng([self.seed, _FILLER_STREAM])
        data[used:] = random_qpsk(rng, len(data) - used)

        cells = np.empty(self.pilot_mask.shape, dtype=complex)
        cells[self.pilot_mask] = self.pilot_symbols()
        cells[~self.pilot_mask] = data
        return FrameGrid(
            cells=cells,
            pilot_mask=self.pilot_mask,
            subcarrier_spacing=self.config.subcarrier_spacing,
            symbol_duration=self.config.symbol_duration,
            seed=self.seed,
        )

    def build(self, payload_bits: np.ndarray) -> FrameGrid:
        coded = self.encode_payload(payload_bits)
        logger.debug(
            "Building frame with %d payload bits in %d code blocks",
            np.size(payload_bits),
            len(coded),
        )
        return self.assemble(coded)


def build_frame(config: OfdmConfig, payload_bits: np.ndarray, seed: int = 0) -> FrameGrid:
    """Build the transmit resource grid for one frame.

    Arguments:
        config: OFDM parameters.
        payload_bits: Information bits, at most the frame capacity.
        seed: Seed of pilots and filler symbols.

    Returns:
        FrameGrid: N x M grid with unit mean power in the data cells.

    Raises:
        CapacityError: If the payload exceeds the capacity.
    """
    return FrameBuilder(config, seed).build(payload_bits)
