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

"""Tests for the resampler, path model, hardware responses and propagation."""

import json

import numpy as np
import pytest

from mimoisac.constants import SPEED_OF_LIGHT
from mimoisac.core.array import UlaGeometry
from mimoisac.core.channel import (
    FractionalResampler,
    HardwareResponse,
    ImpairmentSpec,
    ModelError,
    NoiseMode,
    NoiseSpec,
    PathSet,
    PropagationPath,
    delay_signal,
    make_abe_bank,
    make_afe_bank,
    propagate,
    sample_rayleigh_channel_delays,
)
from mimoisac.core.errors import ConfigurationError
from mimoisac.core.metrics import LinkBudget

SAMPLING_PERIOD = 1 / 491.52e6


def quiet(**kwargs) -> ImpairmentSpec:
    """Impairments without noise and with a fixed common phase."""
    return ImpairmentSpec(common_phase=0.0, noise=NoiseSpec(mode=NoiseMode.NONE), **kwargs)


# ============================================================================
# Resampler
# ============================================================================


class TestResampler:
    """Kaiser-windowed sinc interpolation."""

    def test_integer_delay_is_a_shift(self, rng):
        x = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        delayed = delay_signal(x, 3)
        assert np.allclose(delayed[:3], 0)
        assert np.allclose(delayed[3:], x[:-3])

    def test_fractional_delay_of_slow_tone(self):
        n = np.arange(400)
        tone = np.exp(2j * np.pi * 0.05 * n)
        delayed = delay_signal(tone, 0.5)
        interior = slice(50, 350)
        expected = np.exp(2j * np.pi * 0.05 * (n - 0.5))
        assert np.allclose(delayed[interior], expected[interior], atol=1e-3)

    def test_even_tap_count_rejected(self):
        with pytest.raises(ValueError, match="odd"):
            FractionalResampler(num_taps=30)


# ============================================================================
# Paths
# ============================================================================


class TestPathSet:
    """Multipath sets must hold exactly one static LoS path."""

    def test_line_of_sight_delay(self):
        paths = PathSet.line_of_sight(3.0)
        assert paths.los.delay == pytest.approx(3.0 / SPEED_OF_LIGHT)

    def test_missing_los_rejected(self):
        with pytest.raises(ModelError, match="exactly one"):
            PathSet((PropagationPath(),)).validate()

    def test_two_los_paths_rejected(self):
        los = PropagationPath(is_los=True)
        with pytest.raises(ModelError):
            PathSet((los, los)).validate()

    def test_moving_los_rejected(self):
        with pytest.raises(ModelError, match="Doppler"):
            PathSet((PropagationPath(is_los=True, doppler=10.0),)).validate()

    def test_los_receive_delay_rejected(self):
        with pytest.raises(ModelError, match="transmit side"):
            PathSet((PropagationPath(is_los=True, tx_delay=1e-7, rx_delay=2e-9),)).validate()

    def test_derived_los_passes_validation(self):
        PathSet.line_of_sight(30.0, doa=0.2).validate()

    def test_negative_delay_rejected(self):
        with pytest.raises(ConfigurationError):
            PropagationPath(tx_delay=-1e-9)

    def test_from_link_budget(self):
        budgets = [LinkBudget(tx_range=2.0, rx_range=0.0), LinkBudget(tx_range=1.5, rx_range=1.0)]
        paths = PathSet.from_link_budget(budgets, dods=[0.0, 0.3], doas=[0.0, -0.2])
        los, target = paths.paths
        assert los.is_los and los.rx_delay == 0.0
        assert target.delay == pytest.approx(2.5 / SPEED_OF_LIGHT)
        assert abs(target.attenuation) < abs(los.attenuation)


# ============================================================================
# Hardware
# ============================================================================


class TestHardwareResponse:
    def test_ideal_response_is_flat(self):
        response = HardwareResponse.ideal(3)
        assert response.is_ideal
        assert np.allclose(response.cfr(np.linspace(-1e8, 1e8, 5), 3.68e9), 1.0)

    def test_single_tap_phase_at_intermediate_frequency(self):
        delay = 10e-12
        response = HardwareResponse.from_delays([0.0, delay])
        cfr = response.cfr(np.array([0.0]), intermediate_frequency=3.68e9)
        assert cfr[1, 0] == pytest.approx(np.exp(-2j * np.pi * 3.68e9 * delay))
        assert not response.is_ideal

    def test_measured_like_back_end(self):
        bank = make_abe_bank(8, "measured_like", seed=4, sampling_period=SAMPLING_PERIOD)
        assert bank.tap_delays.shape == (8, 3)
        assert np.all((bank.dominant_delays >= 0) & (bank.dominant_delays <= 3e-9))
        echoes = np.abs(bank.tap_gains[:, 1:])
        assert np.all(echoes < 0.1)

    def test_bank_reproducible_from_seed(self):
        first = make_afe_bank(4, "measured_like", seed=9)
        second = make_afe_bank(4, "measured_like", seed=9)
        assert np.array_equal(first.tap_gains, second.tap_gains)

    def test_unknown_profile_rejected(self):
        with pytest.raises(ValueError):
            make_abe_bank(4, "lab_bench")


class TestRayleighDelays:
    """Per-channel delay mismatch with channel 0 as reference."""

    def test_reference_channel_is_exact(self):
        delays = sample_rayleigh_channel_delays(1e-9, 8, seed=0)
        assert delays[0] == 0.0
        assert np.all(delays >= 0)

    def test_standard_deviation_matches(self):
        delays = sample_rayleigh_channel_delays(2e-12, 200_001, seed=1)
        assert np.std(delays[1:]) == pytest.approx(2e-12, rel=0.02)

    def test_zero_spread_gives_zero_delays(self):
        assert not np.any(sample_rayleigh_channel_delays(0.0, 4, seed=0))

    def test_negative_spread_rejected(self):
        with pytest.raises(ConfigurationError):
            sample_rayleigh_channel_delays(-1.0, 4, seed=0)


# ============================================================================
# Propagation
# ============================================================================


class TestPropagate:
    """Bistatic propagation with offsets, hardware and noise."""

    @pytest.fixture
    def single(self) -> UlaGeometry:
        return UlaGeometry(1, 27.5e9)

    @pytest.fixture
    def pair(self) -> UlaGeometry:
        return UlaGeometry(2, 27.5e9)

    @pytest.fixture
    def signal(self, rng) -> np.ndarray:
        return (rng.standard_normal((1, 200)) + 1j * rng.standard_normal((1, 200))) / np.sqrt(2)

    def test_zero_delay_passes_signal(self, single, pair, signal):
        paths = PathSet((PropagationPath(is_los=True),))
        realization = propagate(
            signal, single, pair, paths, quiet(), seed=0, sampling_period=SAMPLING_PERIOD
        )
        assert realization.samples.shape[0] == 2
        assert np.allclose(realization.samples[:, :200], signal)

    def test_integer_delay_with_carrier_phase(self, single, pair, signal):
        delay = 5 * SAMPLING_PERIOD
        paths = PathSet((PropagationPath(tx_delay=delay, is_los=True),))
        realization = propagate(
            signal, single, pair, paths, quiet(), seed=0, sampling_period=SAMPLING_PERIOD
        )
        phase = np.exp(-2j * np.pi * 27.5e9 * delay)
        assert np.allclose(realization.samples[0, 5:205], phase * signal[0])
        assert np.allclose(realization.samples[0, :5], 0)

    def test_cfo_rotates_samples(self, single, pair, signal):
        paths = PathSet((PropagationPath(is_los=True),))
        realization = propagate(
            signal, single, pair, paths, quiet(cfo=1e6), seed=0, sampling_period=SAMPLING_PERIOD
        )
        k = np.arange(200)
        rotation = np.exp(2j * np.pi * 1e6 * k * SAMPLING_PERIOD)
        assert np.allclose(realization.samples[1, :200], rotation * signal[0])

    def test_buffer_too_small_rejected(self, single, pair, signal):
        paths = PathSet((PropagationPath(tx_delay=50 * SAMPLING_PERIOD, is_los=True),))
        with pytest.raises(ConfigurationError, match="buffer"):
            propagate(
                signal, single, pair, paths, quiet(), seed=0,
                sampling_period=SAMPLING_PERIOD, buffer_samples=10,
            )

    def test_missing_los_rejected(self, single, pair, signal):
        paths = PathSet((PropagationPath(),))
        with pytest.raises(ModelError):
            propagate(signal, single, pair, paths, quiet(), seed=0, sampling_period=SAMPLING_PERIOD)

    def test_snr_mode_sets_noise_power(self, single, pair):
        paths = PathSet((PropagationPath(is_los=True),))
        imp = ImpairmentSpec(common_phase=0.0, noise=NoiseSpec(mode=NoiseMode.SNR, snr_db=10.0))
        realization = propagate(
            np.ones((1, 1000)), single, pair, paths, imp, seed=0, sampling_period=SAMPLING_PERIOD
        )
        assert realization.ground_truth.noise_power == pytest.approx(0.1)

    def test_common_phase_drawn_when_unset(self, single, pair, signal):
        paths = PathSet((PropagationPath(is_los=True),))
        imp = ImpairmentSpec(noise=NoiseSpec(mode=NoiseMode.NONE))
        first = propagate(signal, single, pair, paths, imp, seed=3, sampling_period=SAMPLING_PERIOD)
        again = propagate(signal, single, pair, paths, imp, seed=3, sampling_period=SAMPLING_PERIOD)
        phase = first.ground_truth.common_phase
        assert 0.0 <= phase < 2 * np.pi
        assert again.ground_truth.common_phase == phase

    def test_ground_truth_serializes(self, single, pair, signal):
        paths = PathSet((PropagationPath(is_los=True),))
        realization = propagate(
            signal, single, pair, paths, quiet(sto=2e-9), seed=0, sampling_period=SAMPLING_PERIOD
        )
        truth = json.loads(realization.ground_truth.to_json())
        assert truth["sto_s"] == pytest.approx(2e-9)
        assert len(truth["abe_dominant_delays_s"]) == 2
        assert truth["paths"][0]["is_los"] is True

    def test_sfo_outside_ppm_regime_rejected(self):
        with pytest.raises(ConfigurationError, match="ppm"):
            ImpairmentSpec(sfo=2e-3)
