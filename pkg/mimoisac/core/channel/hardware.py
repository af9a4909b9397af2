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

from mimoisac.core.errors import ConfigurationError, DimensionError


logger = logging.getLogger(__name__)

DEFAULT_SAMPLING_PERIOD = 1 / 491.52e6
MAX_DOMINANT_DELAY = 3e-9
RAYLEIGH_STD_FACTOR = np.sqrt((4 - np.pi) / 2)


class HardwareProfile(str, Enum):
    IDEAL = "ideal"
    MEASURED_LIKE = "measured_like"


@dataclass(frozen=True)
class HardwareResponse:
    """Sparse per-channel impulse responses of an analog front or back end.

    Attributes:
        tap_delays: (channels x taps) tap delays in seconds.
        tap_gains: (channels x taps) complex tap gains; zero pads unused taps.
    """

    tap_delays: np.ndarray
    tap_gains: np.ndarray

    def __post_init__(self) -> None:
        delays = np.atleast_2d(np.asarray(self.tap_delays, dtype=float))
        gains = np.atleast_2d(np.asarray(self.tap_gains, dtype=complex))
        if delays.shape != gains.shape:
            raise DimensionError(
                f"Tap delays {delays.shape} and gains {gains.shape} differ"
            )
        if np.any(delays < 0):
            raise ConfigurationError("Hardware tap delays must be non-negative")
        object.__setattr__(self, "tap_delays", delays)
        object.__setattr__(self, "tap_gains", gains)

    @property
    def num_channels(self) -> int:
        return self.tap_delays.shape[0]

    @property
    def dominant_delays(self) -> np.ndarray:
        """Delay of the strongest tap of each channel."""
        strongest = np.argmax(np.abs(self.tap_gains), axis=1)
        return self.tap_delays[np.arange(self.num_channels), strongest]

    @property
    def is_ideal(self) -> bool:
        return bool(
            np.all(self.tap_delays[self.tap_gains != 0] == 0)
            and np.all(self.tap_gains.sum(axis=1) == 1)
        )

    def taps(self, channel: int) -> list[tuple[float, complex]]:
        """Non-zero (delay, gain) pairs of one channel."""
        gains = self.tap_gains[channel]
        return [
            (float(self.tap_delays[channel, j]), complex(gains[j]))
            for j in np.flatnonzero(gains)
        ]

    def cfr(
        self, subcarrier_frequencies: np.ndarray, intermediate_frequency: float = 0.0
    ) -> np.ndarray:
        """Frequency response sum_j a_j exp(-i 2 pi (f_IF + f_k) d_j), channels x bins."""
        frequencies = intermediate_frequency + np.asarray(subcarrier_frequencies)
        phase = np.exp(
            -2j * np.pi * self.tap_delays[:, :, None] * frequencies[None, None, :]
        )
        return np.sum(self.tap_gains[:, :, None] * phase, axis=1)

    def to_dict(self) -> dict:
        return {
            "tap_delays_s": self.tap_delays.tolist(),
            "tap_gains": [
                [[g.real, g.imag] for g in row] for row in self.tap_gains.tolist()
            ],
        }

    @classmethod
    def ideal(cls, num_channels: int) -> "HardwareResponse":
        return cls(np.zeros((num_channels, 1)), np.ones((num_channels, 1)))

    @classmethod
    def from_delays(cls, delays: np.ndarray) -> "HardwareResponse":
        """Single unit tap per channel at the given delay."""
        delays = np.asarray(delays, dtype=float).reshape(-1, 1)
        return cls(delays, np.ones_like(delays))


def sample_rayleigh_channel_delays(
    sigma_tau: float, num_channels: int, seed: int | np.random.Generator
) -> np.ndarray:
    """Draw per-channel delays with channel 0 fixed at exactly zero.

    Arguments:
        sigma_tau: Standard deviation of the Rayleigh draws in seconds.
        num_channels: Number of receive channels.
        seed: Seed or generator.

    Returns:
        np.ndarray: Non-negative delays in seconds.
    """
    if sigma_tau < 0:
        raise ConfigurationError(f"sigma_tau must be non-negative, got {sigma_tau}")
    if num_channels < 1:
        raise ConfigurationError(f"num_channels must be positive, got {num_channels}")
    delays = np.zeros(num_channels)
    if sigma_tau == 0 or num_channels == 1:
        return delays
    rng = np.random.default_rng(seed)
    delays[1:] = rng.rayleigh(sigma_tau / RAYLEIGH_STD_FACTOR, size=num_channels - 1)
    return delays


def make_abe_bank(
    num_channels: int,
    profile: HardwareProfile | str = HardwareProfile.IDEAL,
    seed: int | np.random.Generator = 0,
    sampling_period: float = DEFAULT_SAMPLING_PERIOD,
) -> HardwareResponse:
    """Synthesize receive back-end responses.

    ``measured_like`` channels have a unit dominant tap at a random delay in
    [0, 3 ns] followed by two weaker echoes 1 to 4 samples later with
    magnitudes r and r^2, r in [0.06, 0.1].
    """
    profile = HardwareProfile(profile)
    if num_channels < 1:
        raise ConfigurationError(f"num_channels must be positive, got {num_channels}")
    if profile is HardwareProfile.IDEAL:
        return HardwareResponse.ideal(num_channels)

    rng = np.random.default_rng(seed)
    dominant = rng.uniform(0.0, MAX_DOMINANT_DELAY, size=num_channels)
    lags = np.sort(rng.uniform(1.0, 4.0, size=(num_channels, 2)), axis=1)
    ratio = rng.uniform(0.06, 0.1, size=num_channels)
    echo_phase = np.exp(2j * np.pi * rng.uniform(size=(num_channels, 2)))

    delays = np.column_stack([dominant, dominant[:, None] + lags * sampling_period])
    gains = np.column_stack(
        [
            np.ones(num_channels),
            ratio * echo_phase[:, 0],
            ratio**2 * echo_phase[:, 1],
        ]
    )
    logger.debug("Synthesized %d measured-like back-end responses", num_channels)
    return HardwareResponse(delays, gains)


def make_afe_bank(
    num_channels: int,
    profile: HardwareProfile | str = HardwareProfile.IDEAL,
    seed: int | np.random.Generator = 0,
    sampling_period: float = DEFAULT_SAMPLING_PERIOD,
) -> HardwareResponse:
    """Synthesize transmit front-end responses.

    ``measured_like`` channels have a unit direct tap plus two sample-spaced
    echoes with magnitudes in [0.05, 0.15] and random phases.
    """
    profile = HardwareProfile(profile)
    if num_channels < 1:
        raise ConfigurationError(f"num_channels must be positive, got {num_channels}")
    if profile is HardwareProfile.IDEAL:
        return HardwareResponse.ideal(num_channels)

    rng = np.random.default_rng(seed)
    magnitudes = rng.uniform(0.05, 0.15, size=(num_channels, 2))
    phases = np.exp(2j * np.pi * rng.uniform(size=(num_channels, 2)))
    delays = np.tile(np.arange(3) * sampling_period, (num_channels, 1))
    gains = np.column_stack([np.ones(num_channels), magnitudes * phases])
    return HardwareResponse(delays, gains)
