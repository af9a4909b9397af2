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

from dataclasses import dataclass, fields

import numpy as np

from mimoisac.constants import BOLTZMANN, SPEED_OF_LIGHT, STANDARD_TEMPERATURE_K
from mimoisac.core.errors import ConfigurationError


FOUR_PI_CUBED = (4 * np.pi) ** 3


@dataclass(frozen=True)
class LinkBudget:
    """Bistatic link parameters of one path.

    Gains and the noise figure are linear. For the LoS path ``rcs`` is unused
    and ``rx_range`` may be zero.
    """

    tx_range: float
    rx_range: float
    tx_power: float = 1.0
    tx_gain: float = 1.0
    rx_gain: float = 1.0
    rcs: float = 1.0
    carrier_frequency: float = 27.5e9
    bandwidth: float = 491.52e6
    temperature: float = STANDARD_TEMPERATURE_K
    noise_figure: float = 10.0
    boltzmann: float = BOLTZMANN

    def __post_init__(self) -> None:
        for item in fields(self):
            value = getattr(self, item.name)
            if item.name == "rx_range":
                if value < 0:
                    raise ConfigurationError("rx_range must be non-negative")
            elif value <= 0:
                raise ConfigurationError(f"{item.name} must be positive, got {value}")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency

    @property
    def noise_power(self) -> float:
        """k_B B T NF in watts."""
        return self.boltzmann * self.bandwidth * self.temperature * self.noise_figure

    def reflected_amplitude(self) -> float:
        """Amplitude gain of a single-element bistatic reflection."""
        power = (
            self.tx_power
            * self.tx_gain
            * self.rx_gain
            * self.rcs
            * self.wavelength**2
            / (FOUR_PI_CUBED * self.tx_range**2 * self.rx_range**2)
        )
        return float(np.sqrt(power))

    def direct_amplitude(self) -> float:
        """Free-space amplitude gain of the direct path over ``tx_range``."""
        power = (
            self.tx_power
            * self.tx_gain
            * self.rx_gain
            * (self.wavelength / (4 * np.pi * self.tx_range)) ** 2
        )
        return float(np.sqrt(power))


def image_snr(
    budget: LinkBudget,
    n_tx: int,
    n_rx: int,
    g_p: float,
    with_doa_gain: bool = False,
) -> float:
    """Predicted target SNR in a radar image, in dB.

    Arguments:
        budget: Link parameters of the target path.
        n_tx: Transmit array elements.
        n_rx: Receive array elements.
        g_p: Linear range-Doppler processing gain (N M).
        with_doa_gain: Include the coherent gain of Fourier beamforming over
            ``n_rx`` channels.
    """
    if n_tx < 1 or n_rx < 1 or g_p <= 0:
        raise ConfigurationError("n_tx, n_rx and g_p must be positive")
    if budget.rx_range <= 0:
        raise ConfigurationError("Image SNR needs a reflected path with rx_range > 0")
    rx_array_gain = n_rx if with_doa_gain else 1
    signal = (
        budget.tx_power
        * n_tx
        * budget.tx_gain
        * rx_array_gain
        * budget.rx_gain
        * budget.rcs
        * budget.wavelength**2
        * g_p
    )
    denominator = FOUR_PI_CUBED * budget.tx_range**2 * budget.rx_range**2 * budget.noise_power
    return float(10 * np.log10(signal / denominator))
