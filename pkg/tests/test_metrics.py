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

"""Tests for link budgets, derived ISAC parameters and image quality metrics."""

from fractions import Fraction

import numpy as np
import pytest

from mimoisac.constants import DB_CEILING, DB_FLOOR
from mimoisac.core.errors import ConfigurationError, DimensionError
from mimoisac.core.metrics import (
    LinkBudget,
    MetricError,
    NoPeakError,
    PhaseMapping,
    bit_error_rate,
    delay_to_phase_std,
    derive_isac_params,
    evm,
    image_snr,
    mean_image_sir,
    peak_sidelobe_metrics,
    power_db,
    pplr,
)
from mimoisac.core.waveform import full_profile

SAMPLING_PERIOD = 1 / 491.52e6
INTERMEDIATE_FREQUENCY = 3.68e9


# ============================================================================
# Derived parameters
# ============================================================================


class TestIsacParams:
    """Performance figures of the 28 GHz-band parameter set with 8 receive channels."""

    @pytest.fixture
    def params(self):
        return derive_isac_params(full_profile(), n_rx=8)

    def test_communication_rate(self, params):
        assert params.comm_rate / 1e9 == pytest.approx(0.39, abs=0.005)

    def test_processing_gains(self, params):
        assert params.processing_gain == pytest.approx(60.22, abs=0.015)
        assert params.processing_gain_with_doa == pytest.approx(60.206 + 9.031, abs=0.01)

    def test_range_figures(self, params):
        assert params.range_resolution == pytest.approx(0.61, abs=0.005)
        assert params.max_unambiguous_range == pytest.approx(1249.14, abs=0.01)
        assert params.max_isi_free_range == pytest.approx(312.28, abs=0.01)

    def test_doppler_figures(self, params):
        assert params.doppler_resolution == pytest.approx(375.0)
        assert params.max_unambiguous_doppler == pytest.approx(96e3)
        assert params.max_ici_free_doppler == pytest.approx(24e3)

    def test_azimuth_figures(self, params):
        assert np.degrees(params.azimuth_resolution) == pytest.approx(14.32, abs=0.005)
        assert np.degrees(params.max_unambiguous_azimuth) == pytest.approx(90.0)

    def test_table_rows(self, params):
        rows = dict(params.table_rows())
        assert rows["Communication rate"] == "0.39 Gbit/s"
        assert rows["Range resolution"] == "0.61 m"
        assert rows["Max. unambiguous range"] == "1249.14 m"
        assert rows["Doppler resolution"] == "375.00 Hz"
        assert rows["Azimuth resolution"] == "14.32 deg"

    def test_uncoded_rate_override(self):
        params = derive_isac_params(full_profile(), n_rx=8, code_rate=Fraction(1))
        assert params.comm_rate / 1e9 == pytest.approx(0.59, abs=0.005)

    def test_needs_receive_channels(self):
        with pytest.raises(ConfigurationError):
            derive_isac_params(full_profile(), n_rx=0)


class TestLinkBudget:
    def test_noise_power(self):
        budget = LinkBudget(tx_range=1.0, rx_range=1.0, noise_figure=1.0, bandwidth=1.0, temperature=1.0, boltzmann=2.0)
        assert budget.noise_power == pytest.approx(2.0)

    def test_doa_gain_adds_array_size(self):
        budget = LinkBudget(tx_range=2.0, rx_range=3.0)
        plain = image_snr(budget, 4, 8, g_p=1024)
        steered = image_snr(budget, 4, 8, g_p=1024, with_doa_gain=True)
        assert steered - plain == pytest.approx(10 * np.log10(8))

    def test_image_snr_needs_reflection(self):
        with pytest.raises(ConfigurationError):
            image_snr(LinkBudget(tx_range=2.0, rx_range=0.0), 4, 8, g_p=1024)

    def test_non_positive_parameters_rejected(self):
        with pytest.raises(ConfigurationError):
            LinkBudget(tx_range=0.0, rx_range=1.0)


# ============================================================================
# Phase mismatch
# ============================================================================


class TestDelayToPhaseStd:
    """IF phase spread caused by back-end delay mismatch."""

    @pytest.mark.parametrize("samples, expected_deg", [(1e-3, 2.70), (1e-2, 26.96)])
    def test_unwrapped_mapping(self, samples, expected_deg):
        sigma = delay_to_phase_std(samples * SAMPLING_PERIOD, INTERMEDIATE_FREQUENCY)
        assert np.degrees(sigma) == pytest.approx(expected_deg, abs=0.02)

    def test_wrapped_matches_unwrapped_for_small_spread(self):
        sigma_tau = 1e-3 * SAMPLING_PERIOD
        wrapped = delay_to_phase_std(sigma_tau, INTERMEDIATE_FREQUENCY, PhaseMapping.WRAPPED)
        assert wrapped == pytest.approx(2 * np.pi * INTERMEDIATE_FREQUENCY * sigma_tau, rel=0.02)

    def test_wrapped_saturates_at_uniform_spread(self):
        wrapped = delay_to_phase_std(1e-6, INTERMEDIATE_FREQUENCY, "wrapped")
        assert wrapped == pytest.approx(np.pi / np.sqrt(3), rel=0.01)

    def test_circular_close_for_small_spread(self):
        sigma_tau = 1e-3 * SAMPLING_PERIOD
        circular = delay_to_phase_std(sigma_tau, INTERMEDIATE_FREQUENCY, PhaseMapping.CIRCULAR)
        assert circular == pytest.approx(2 * np.pi * INTERMEDIATE_FREQUENCY * sigma_tau, rel=0.02)

    def test_negative_spread_rejected(self):
        with pytest.raises(MetricError):
            delay_to_phase_std(-1.0, INTERMEDIATE_FREQUENCY)


# ============================================================================
# Communication quality
# ============================================================================


class TestEvm:
    def test_gain_error(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        result = evm(frame.with_cells(1.122 * frame.cells), frame)
        assert result.mean_db == pytest.approx(-18.3, abs=0.05)
        assert result.spread_db == pytest.approx(0.0, abs=1e-9)

    def test_perfect_frame_hits_floor(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        assert evm(frame, frame).mean_db == DB_FLOOR

    def test_pilots_excluded(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        damaged = np.where(frame.pilot_mask, 0.0, frame.cells)
        assert evm(frame.with_cells(damaged), frame).mean_db == DB_FLOOR

    def test_erased_cells_excluded(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        erased = ~frame.pilot_mask
        erased[:, 1:] = False
        damaged = frame.with_cells(np.where(erased, 0.0, frame.cells), erased=erased)
        assert evm(damaged, frame).mean_db == DB_FLOOR

    def test_shape_mismatch_rejected(self, small_config, desk_config, make_frame):
        small, _ = make_frame(small_config)
        large, _ = make_frame(desk_config)
        with pytest.raises(DimensionError):
            evm(small, large)


class TestBitErrorRate:
    def test_counts_errors(self):
        assert bit_error_rate([0, 1, 1, 0], [0, 1, 0, 1]) == 0.5

    def test_empty_is_error_free(self):
        assert bit_error_rate([], []) == 0.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(DimensionError):
            bit_error_rate([0, 1], [0])


# ============================================================================
# Radar image quality
# ============================================================================


class TestSidelobeMetrics:
    """PSLR and ISLR of 1-D cuts."""

    def test_dirichlet_kernel(self):
        profile = np.fft.fft(np.ones(8), 2048)
        lobes = peak_sidelobe_metrics(profile, circular=True)
        assert lobes.pslr_db == pytest.approx(-12.8, abs=0.1)
        assert lobes.peak_index == 0
        assert lobes.mainlobe == (-256, 256)
        assert lobes.islr_db < lobes.pslr_db + 10

    def test_mainlobe_fallback_without_minimum(self):
        profile = np.array([1.0, 2.0, 3.0, 10.0, 3.0, 2.0, 1.0])
        lobes = peak_sidelobe_metrics(profile, mainlobe_width=3)
        assert lobes.mainlobe == (-3, 3)
        assert lobes.pslr_db == DB_FLOOR

    def test_edge_peak_needs_circular_mode(self):
        profile = np.array([10.0, 3.0, 1.0, 0.5, 1.0, 2.0])
        linear = peak_sidelobe_metrics(profile)
        circular = peak_sidelobe_metrics(profile, circular=True)
        assert linear.pslr_db == pytest.approx(power_db(4 / 100))
        assert circular.pslr_db == pytest.approx(power_db(0.25 / 100))
        assert linear.peak_index == circular.peak_index == 0

    def test_flat_profile_has_no_peak(self):
        with pytest.raises(NoPeakError):
            peak_sidelobe_metrics(np.ones(16))
        with pytest.raises(NoPeakError):
            peak_sidelobe_metrics(np.zeros(16))


class TestImageMetrics:
    def test_pplr(self):
        assert pplr(0.5, 1.0) == pytest.approx(-3.01, abs=0.005)
        assert pplr(1.0, 1.0) == 0.0

    def test_pplr_needs_reference(self):
        with pytest.raises(MetricError):
            pplr(1.0, 0.0)

    def test_sir(self):
        cut = np.ones((4, 4))
        cut[1, 2] = 10.0
        assert mean_image_sir(cut, (1, 2)) == pytest.approx(20.0)

    def test_sir_of_isolated_target_hits_ceiling(self):
        cut = np.zeros((4, 4))
        cut[0, 0] = 1.0
        assert mean_image_sir(cut, (0, 0)) == DB_CEILING

    def test_sir_guard_wraps_around_edges(self):
        cut = np.ones((6, 8))
        cut[0, 0] = 10.0
        cut[[1, 5], 0] = 5.0
        cut[0, [1, 7]] = 5.0
        # Only the plus-shaped mainlobe is bright; the guard leaves ones behind.
        assert mean_image_sir(cut, (0, 0), guard=(1, 1)) == pytest.approx(20.0)
        assert mean_image_sir(cut, (0, 0)) < 20.0

    def test_guard_covering_image_rejected(self):
        with pytest.raises(MetricError, match="covers"):
            mean_image_sir(np.ones((4, 4)), (1, 1), guard=(2, 2))

    def test_sir_rejects_bad_target(self):
        with pytest.raises(MetricError):
            mean_image_sir(np.ones((2, 2)), (5, 0))

    @pytest.mark.parametrize(
        "ratio, expected", [(0.0, DB_FLOOR), (1e-20, DB_FLOOR), (np.inf, DB_CEILING), (100.0, 20.0)]
    )
    def test_power_db_clamps(self, ratio, expected):
        assert power_db(ratio) == pytest.approx(expected)
