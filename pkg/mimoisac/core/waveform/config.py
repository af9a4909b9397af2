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
from enum import Enum
from fractions import Fraction

import numpy as np

from mimoisac.core.errors import ConfigurationError


class Modulation(str, Enum):
    QPSK = "qpsk"

    @property
    def bits_per_symbol(self) -> int:
        return 2


class CodeKind(str, Enum):
    NONE = "none"
    LDPC = "ldpc"


def _is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


@dataclass(frozen=True)
class CodeSpec:
    """Channel code selection.

    Attributes:
        kind: ``none`` (uncoded) or ``ldpc``.
        rate: Code rate k/n.
        block_length: Codeword length n in bits.
        max_iterations: Belief-propagation iteration cap.
        construction_seed: Seed of the parity-check matrix construction.
    """

    kind: CodeKind = CodeKind.LDPC
    rate: Fraction = Fraction(2, 3)
    block_length: int = 648
    max_iterations: int = 50
    construction_seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", CodeKind(self.kind))
        object.__setattr__(self, "rate", Fraction(self.rate).limit_denominator(1000))
        if not 0 < self.rate <= 1:
            raise ConfigurationError(f"Code rate must lie in (0, 1], got {self.rate}")
        if self.kind is CodeKind.NONE and self.rate != 1:
            raise ConfigurationError("An uncoded link must have rate 1")
        if self.kind is CodeKind.LDPC:
            if self.rate == 1:
                raise ConfigurationError("An LDPC code needs a rate below 1")
            if self.block_length % 2:
                raise ConfigurationError("LDPC block length must be even for QPSK")
            if (self.block_length * self.rate).denominator != 1:
                raise ConfigurationError(
                    f"Block length {self.block_length} not compatible with "
                    f"rate {self.rate}"
                )

    @classmethod
    def uncoded(cls) -> "CodeSpec":
        return cls(kind=CodeKind.NONE, rate=Fraction(1))


@dataclass(frozen=True)
class OfdmConfig:
    """OFDM frame and signal parameters.

    Defaults reproduce the 28 GHz-band parameter set with N=2048 subcarriers,
    240 kHz spacing, a 512-sample cyclic prefix and 512 symbols per frame.
    """

    num_subcarriers: int = 2048
    num_symbols: int = 512
    cp_length: int = 512
    subcarrier_spacing: float = 240e3
    carrier_frequency: float = 27.5e9
    pilot_subcarrier_spacing: int = 2
    pilot_symbol_spacing: int = 2
    modulation: Modulation = Modulation.QPSK
    code: CodeSpec = field(default_factory=CodeSpec)

    def __post_init__(self) -> None:
        object.__setattr__(self, "modulation", Modulation(self.modulation))
        if not _is_power_of_two(self.num_subcarriers):
            raise ConfigurationError(
                f"num_subcarriers must be a power of two, got {self.num_subcarriers}"
            )
        if not _is_power_of_two(self.num_symbols):
            raise ConfigurationError(
                f"num_symbols must be a power of two, got {self.num_symbols}"
            )
        if self.cp_length < 0:
            raise ConfigurationError("cp_length must be non-negative")
        if self.subcarrier_spacing <= 0 or self.carrier_frequency <= 0:
            raise ConfigurationError("Frequencies must be positive")
        if (
            self.pilot_subcarrier_spacing < 1
            or self.num_subcarriers % self.pilot_subcarrier_spacing
        ):
            raise ConfigurationError(
                "pilot_subcarrier_spacing must divide num_subcarriers"
            )
        if self.pilot_symbol_spacing < 1 or self.num_symbols % self.pilot_symbol_spacing:
            raise ConfigurationError("pilot_symbol_spacing must divide num_symbols")

    @property
    def bandwidth(self) -> float:
        return self.num_subcarriers * self.subcarrier_spacing

    @property
    def sampling_period(self) -> float:
        return 1.0 / self.bandwidth

    @property
    def symbol_length(self) -> int:
        """Samples per OFDM symbol including the cyclic prefix."""
        return self.num_subcarriers + self.cp_length

    @property
    def symbol_duration(self) -> float:
        return self.symbol_length * self.sampling_period

    @property
    def frame_length(self) -> int:
        """Samples of preamble plus all payload symbols."""
        return (self.num_symbols + 1) * self.symbol_length

    @property
    def num_pilot_subcarriers(self) -> int:
        return self.num_subcarriers // self.pilot_subcarrier_spacing

    @property
    def num_pilot_symbols(self) -> int:
        return self.num_symbols // self.pilot_symbol_spacing

    @property
    def num_pilot_cells(self) -> int:
        return self.num_pilot_subcarriers * self.num_pilot_symbols

    @property
    def num_data_cells(self) -> int:
        return self.num_subcarriers * self.num_symbols - self.num_pilot_cells

    @property
    def subcarrier_offsets(self) -> np.ndarray:
        """Signed subcarrier index of each FFT bin (0, 1, ..., -N/2, ..., -1)."""
        return np.fft.fftfreq(self.num_subcarriers) * self.num_subcarriers

    @property
    def subcarrier_frequencies(self) -> np.ndarray:
        """Baseband frequency of each FFT bin in Hz."""
        return self.subcarrier_offsets * self.subcarrier_spacing

    def pilot_mask(self) -> np.ndarray:
        """Boolean N x M mask of pilot cells."""
        mask = np.zeros((self.num_subcarriers, self.num_symbols), dtype=bool)
        mask[:: self.pilot_subcarrier_spacing, :: self.pilot_symbol_spacing] = True
        return mask


def desk_profile() -> OfdmConfig:
    """Reduced frame keeping the full-profile bandwidth (491.52 MHz)."""
    return OfdmConfig(
        num_subcarriers=256,
        num_symbols=64,
        cp_length=64,
        subcarrier_spacing=1.92e6,
    )


def full_profile() -> OfdmConfig:
    return OfdmConfig()
