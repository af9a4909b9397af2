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
import json
import logging
import math

import numpy as np

from mimoisac.constants import BOLTZMANN, STANDARD_TEMPERATURE_K
from mimoisac.core.array import (
    UlaGeometry,
    receive_element_phases,
    transmit_element_phases,
)
from mimoisac.core.channel.hardware import HardwareResponse
from mimoisac.core.channel.paths import PathSet
from mimoisac.core.channel.resampler import DEFAULT_RESAMPLER
from mimoisac.core.errors import ConfigurationError, DimensionError


logger = logging.getLogger(__name__)

MAX_NORMALIZED_SFO = 1e-3


class NoiseMode(str, Enum):
    NONE = "none"
    THERMAL = "thermal"
    SNR = "snr"


@dataclass(frozen=True)
class NoiseSpec:
    """Additive white Gaussian noise settings.

    ``thermal`` adds k_B B T NF per complex sample; ``snr`` sets the noise
    power relative to the mean received signal power.
    """

    mode: NoiseMode = NoiseMode.NONE
    noise_figure_db: float = 10.0
    temperature: float = STANDARD_TEMPERATURE_K
    snr_db: float = 30.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", NoiseMode(self.mode))
        if self.temperature <= 0:
            raise ConfigurationError("Noise temperature must be positive")

    def thermal_power(self, bandwidth: float) -> float:
        return BOLTZMANN * bandwidth * self.temperature * 10 ** (self.noise_figure_db / 10)


@dataclass(frozen=True)
class ImpairmentSpec:
    """Transmitter-receiver offsets and hardware responses.

    Attributes:
        sto: Sampling time offset in seconds.
        cfo: Carrier frequency offset in Hz.
        common_phase: Common phase offset in radians; drawn uniformly when None.
        sfo: Normalized sampling frequency offset.
        noise: AWGN settings.
        abe: Receive back-end responses, ideal when None.
        afe: Transmit front-end responses, ideal when None.
        intermediate_frequency: Digital IF at which back-end delays act, in Hz.
    """

    sto: float = 0.0
    cfo: float = 0.0
    common_phase: float | None = None
    sfo: float = 0.0
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    abe: HardwareResponse | None = None
    afe: HardwareResponse | None = None
    intermediate_frequency: float = 0.0

    def __post_init__(self) -> None:
        if abs(self.sfo) >= MAX_NORMALIZED_SFO:
            raise ConfigurationError(
                f"Normalized SFO {self.sfo} outside the ppm regime (|sfo| < 1e-3)"
            )
        if self.intermediate_frequency < 0:
            raise ConfigurationError("intermediate_frequency must be non-negative")


@dataclass(frozen=True)
class GroundTruth:
    """Immutable record of everything a realization was generated from."""

    sto: float
    cfo: float
    sfo: float
    common_phase: float
    intermediate_frequency: float
    sampling_period: float
    noise_power: float
    buffer_samples: int
    paths: tuple[dict, ...]
    abe_dominant_delays: tuple[float, ...]
    abe: dict

    def to_dict(self) -> dict:
        return {
            "sto_s": self.sto,
            "cfo_hz": self.cfo,
            "sfo": self.sfo,
            "common_phase_rad": self.common_phase,
            "intermediate_frequency_hz": self.intermediate_frequency,
            "sampling_period_s": self.sampling_period,
            "noise_power_w": self.noise_power,
            "buffer_samples": self.buffer_samples,
            "paths": list(self.paths),
            "abe_dominant_delays_s": list(self.abe_dominant_delays),
            "abe": self.abe,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


@dataclass(frozen=True)
class ChannelRealization:
    """Per-receive-channel samples with their ground truth."""

    samples: np.ndarray
    ground_truth: GroundTruth

    @property
    def num_channels(self) -> int:
        return self.samples.shape[0]


def _apply_front_end(
    tx: np.ndarray, afe: HardwareResponse, sampling_period: float
) -> np.ndarray:
    if afe.num_channels != tx.shape[0]:
        raise DimensionError(
            f"{afe.num_channels} AFE responses for {tx.shape[0]} transmit channels"
        )
    filtered = np.zeros(tx.shape, dtype=complex)
    positions = np.arange(tx.shape[1], dtype=float)
    for channel in range(tx.shape[0]):
        for delay, gain in afe.taps(channel):
            filtered[channel] += gain * DEFAULT_RESAMPLER(
                tx[channel], positions - delay / sampling_period
            )
    return filtered


def _required_buffer(
    length: int, max_delay_samples: float, sfo: float
) -> int:
    last_output = (length + max_delay_samples) / (1 + sfo)
    return max(0, math.ceil(last_output + DEFAULT_RESAMPLER.half_width + 1 - length))


def propagate(
    tx_channels: np.ndarray,
    geometry_tx: UlaGeometry,
    geometry_rx: UlaGeometry,
    paths: PathSet,
    imp: ImpairmentSpec,
    seed: int | np.random.Generator,
    *,
    sampling_period: float,
    buffer_samples: int | None = None,
) -> ChannelRealization:
    """Propagate per-element transmit signals through the bistatic MIMO channel.

    Every receive channel is the sum over paths and back-end taps of the
    array-combined transmit signal, delayed by path, STO and tap delay and
    evaluated on the receiver's clock k (1 + sfo) T_s, multiplied by the path
    amplitude, carrier phase, receive element phase, tap gain, IF phase,
    Doppler and CFO rotations and the common phase. Noise is added last.

    Arguments:
        tx_channels: (N_tx x L) per-element transmit samples.
        geometry_tx: Transmit array.
        geometry_rx: Receive array.
        paths: Multipath set with one LoS path.
        imp: Offsets, hardware responses and noise.
        seed: Seed of the common phase and noise draws.
        sampling_period: T_s in seconds.
        buffer_samples: Samples appended after the input length. Defaults to the
            minimum that holds the most delayed component.

    Returns:
        ChannelRealization: (N_rx x (L + buffer)) samples and the ground truth.

    Raises:
        ModelError: If the path set has no (or several) LoS paths.
        ConfigurationError: If a delay does not fit into the buffer or is negative.
    """
    tx = np.atleast_2d(np.asarray(tx_channels, dtype=complex))
    if tx.shape[0] != geometry_tx.num_elements:
        raise DimensionError(
            f"{tx.shape[0]} transmit channels for a {geometry_tx.num_elements}-element array"
        )
    paths.validate()
    num_rx = geometry_rx.num_elements
    abe = imp.abe if imp.abe is not None else HardwareResponse.ideal(num_rx)
    if abe.num_channels != num_rx:
        raise DimensionError(f"{abe.num_channels} ABE responses for {num_rx} receive channels")

    rng = np.random.default_rng(seed)
    common_phase = (
        float(rng.uniform(0.0, 2 * np.pi)) if imp.common_phase is None else imp.common_phase
    )

    delays = np.array([path.delay for path in paths]) + imp.sto
    min_delay = delays.min() + abe.tap_delays.min()
    if min_delay < 0:
        raise ConfigurationError(f"Total delay {min_delay:.3e} s is negative")
    max_delay_samples = (delays.max() + abe.tap_delays.max()) / sampling_period

    length = tx.shape[1]
    needed = _required_buffer(length, max_delay_samples, imp.sfo)
    if buffer_samples is None:
        buffer_samples = needed
    elif buffer_samples < needed:
        raise ConfigurationError(
            f"Delays need a buffer of {needed} samples, only {buffer_samples} configured"
        )

    if imp.afe is not None:
        tx = _apply_front_end(tx, imp.afe, sampling_period)

    carrier = geometry_rx.carrier_frequency
    output_length = length + buffer_samples
    clock = np.arange(output_length) * (1 + imp.sfo)
    time = clock * sampling_period
    received = np.zeros((num_rx, output_length), dtype=complex)

    for path, path_delay in zip(paths, delays):
        combined = transmit_element_phases(geometry_tx, path.dod) @ tx
        element_phase = receive_element_phases(geometry_rx, path.doa)
        path_gain = complex(path.attenuation) * np.exp(-2j * np.pi * carrier * path.delay)
        rotation = path.doppler + imp.cfo
        for channel in range(num_rx):
            for tap_delay, tap_gain in abe.taps(channel):
                component = DEFAULT_RESAMPLER(
                    combined, clock - (path_delay + tap_delay) / sampling_period
                )
                gain = (
                    path_gain
                    * element_phase[channel]
                    * tap_gain
                    * np.exp(-2j * np.pi * imp.intermediate_frequency * tap_delay)
                )
                received[channel] += (
                    gain * np.exp(2j * np.pi * rotation * (time - tap_delay)) * component
                )
    received *= np.exp(1j * common_phase)

    noise_power = 0.0
    if imp.noise.mode is NoiseMode.THERMAL:
        noise_power = imp.noise.thermal_power(1 / sampling_period)
    elif imp.noise.mode is NoiseMode.SNR:
        signal_power = np.sum(np.abs(received) ** 2) / (num_rx * length)
        noise_power = float(signal_power / 10 ** (imp.noise.snr_db / 10))
    if noise_power > 0:
        noise = rng.standard_normal((2, num_rx, output_length))
        received += np.sqrt(noise_power / 2) * (noise[0] + 1j * noise[1])

    logger.debug(
        "Propagated %d paths to %d channels, buffer %d samples, noise %.3e W",
        len(paths),
        num_rx,
        buffer_samples,
        noise_power,
    )
    truth = GroundTruth(
        sto=imp.sto,
        cfo=imp.cfo,
        sfo=imp.sfo,
        common_phase=common_phase,
        intermediate_frequency=imp.intermediate_frequency,
        sampling_period=sampling_period,
        noise_power=noise_power,
        buffer_samples=buffer_samples,
        paths=tuple(path.to_dict() for path in paths),
        abe_dominant_delays=tuple(float(d) for d in abe.dominant_delays),
        abe=abe.to_dict(),
    )
    return ChannelRealization(samples=received, ground_truth=truth)
