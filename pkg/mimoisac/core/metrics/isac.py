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

from dataclasses import asdict, dataclass
from fractions import Fraction
import logging

import numpy as np

from mimoisac.constants import SPEED_OF_LIGHT
from mimoisac.core.errors import ConfigurationError
from mimoisac.core.waveform import OfdmConfig


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IsacParams:
    """Communication and radar performance figures of one OFDM configuration.

    Rates are in bit/s, gains in dB, ranges in meters, Doppler shifts in Hz
    and angles in radians. Symmetric limits (Doppler, azimuth) are given as
    their positive bound.
    """

    comm_rate: float
    processing_gain: float
    processing_gain_with_doa: float
    range_resolution: float
    max_unambiguous_range: float
    max_isi_free_range: float
    doppler_resolution: float
    max_unambiguous_doppler: float
    max_ici_free_doppler: float
    azimuth_resolution: float
    max_unambiguous_azimuth: float

    def to_dict(self) -> dict:
        return asdict(self)

    def table_rows(self) -> list[tuple[str, str]]:
        """Rows in display units, rounded to two decimals."""
        return [
            ("Communication rate", f"{self.comm_rate / 1e9:.2f} Gbit/s"),
            ("Processing gain", f"{self.processing_gain:.2f} dB"),
            ("Processing gain with DoA", f"{self.processing_gain_with_doa:.2f} dB"),
            ("Range resolution", f"{self.range_resolution:.2f} m"),
            ("Max. unambiguous range", f"{self.max_unambiguous_range:.2f} m"),
            ("Max. ISI-free range", f"{self.max_isi_free_range:.2f} m"),
            ("Doppler resolution", f"{self.doppler_resolution:.2f} Hz"),
            ("Max. unambiguous Doppler", f"±{self.max_unambiguous_doppler / 1e3:.2f} kHz"),
            ("Max. ICI-free Doppler", f"±{self.max_ici_free_doppler / 1e3:.2f} kHz"),
            ("Azimuth resolution", f"{np.degrees(self.azimuth_resolution):.2f} deg"),
            ("Max. unambiguous azimuth", f"±{np.degrees(self.max_unambiguous_azimuth):.2f} deg"),
        ]


def derive_isac_params(
    config: OfdmConfig,
    n_rx: int,
    code_rate: Fraction | float | None = None,
    bits_per_symbol: int | None = None,
) -> IsacParams:
    """Derive the ISAC performance parameters of config with n_rx receive channels.

    code_rate and bits_per_symbol default to the configured code and
    modulation. The communication rate counts data cells only, at full duty
    cycle.
    """
    if n_rx < 1:
        raise ConfigurationError(f"n_rx must be positive, got {n_rx}")
    if code_rate is None:
        code_rate = config.code.rate
    if bits_per_symbol is None:
        bits_per_symbol = config.modulation.bits_per_symbol

    bandwidth = config.bandwidth
    symbol_duration = config.symbol_duration
    data_fraction = config.num_data_cells / (config.num_subcarriers * config.num_symbols)
    comm_rate = (
        bits_per_symbol * float(code_rate) * data_fraction * config.num_subcarriers / symbol_duration
    )
    gain = config.num_subcarriers * config.num_symbols
    params = IsacParams(
        comm_rate=comm_rate,
        processing_gain=float(10 * np.log10(gain)),
        processing_gain_with_doa=float(10 * np.log10(gain * n_rx)),
        range_resolution=SPEED_OF_LIGHT / bandwidth,
        max_unambiguous_range=SPEED_OF_LIGHT / config.subcarrier_spacing,
        max_isi_free_range=SPEED_OF_LIGHT * config.cp_length / bandwidth,
        doppler_resolution=1 / (config.num_symbols * symbol_duration),
        max_unambiguous_doppler=1 / (2 * symbol_duration),
        max_ici_free_doppler=config.subcarrier_spacing / 10,
        azimuth_resolution=2 / n_rx,
        max_unambiguous_azimuth=np.pi / 2,
    )
    logger.debug("Derived ISAC parameters %s", params)
    return params
