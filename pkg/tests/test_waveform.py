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

"""Tests for OFDM configuration, channel coding, framing and the transmitter."""

from fractions import Fraction

import numpy as np
import pytest

from mimoisac.core.array import UlaGeometry, transmit_steering_vector
from mimoisac.core.errors import ConfigurationError, DimensionError
from mimoisac.core.waveform import (
    CalibrationError,
    CapacityError,
    CodeKind,
    CodeSpec,
    FrameBuilder,
    LdpcCode,
    OfdmConfig,
    apply_tx_beamforming,
    apply_tx_predistortion,
    desk_profile,
    from_time_domain,
    full_profile,
    make_channel_code,
    preamble_body,
    qpsk_llr,
    qpsk_map,
    to_time_domain,
)


# ============================================================================
# Configuration
# ============================================================================


class TestOfdmConfig:
    """Derived frame quantities and validation."""

    def test_profiles_share_the_bandwidth(self):
        assert desk_profile().bandwidth == pytest.approx(491.52e6)
        assert full_profile().bandwidth == pytest.approx(491.52e6)

    def test_desk_frame_layout(self):
        config = desk_profile()
        assert config.symbol_length == 320
        assert config.frame_length == 65 * 320
        assert config.symbol_duration == pytest.approx(320 / 491.52e6)

    def test_pilot_grid(self, small_config):
        mask = small_config.pilot_mask()
        assert np.count_nonzero(mask) == small_config.num_pilot_cells == 32 * 8
        assert mask[0, 0] and not mask[1, 0] and not mask[0, 1]
        assert small_config.num_data_cells == 64 * 16 - 256

    def test_subcarrier_offsets_in_fft_order(self, small_config):
        offsets = small_config.subcarrier_offsets
        assert offsets[0] == 0 and offsets[1] == 1
        assert offsets[32] == -32 and offsets[-1] == -1

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"num_subcarriers": 100},
            {"num_symbols": 48},
            {"cp_length": -1},
            {"subcarrier_spacing": 0.0},
            {"pilot_subcarrier_spacing": 3},
        ],
    )
    def test_invalid_configs_rejected(self, kwargs):
        with pytest.raises(ConfigurationError):
            OfdmConfig(**kwargs)


class TestCodeSpec:
    def test_uncoded_has_unit_rate(self):
        spec = CodeSpec.uncoded()
        assert spec.kind is CodeKind.NONE
        assert spec.rate == 1

    def test_rate_parsed_from_string_fraction(self):
        assert CodeSpec(rate=Fraction("2/3")).rate == Fraction(2, 3)

    def test_ldpc_needs_rate_below_one(self):
        with pytest.raises(ConfigurationError):
            CodeSpec(kind=CodeKind.LDPC, rate=Fraction(1))

    def test_block_length_must_fit_rate(self):
        with pytest.raises(ConfigurationError, match="not compatible"):
            CodeSpec(rate=Fraction(2, 3), block_length=100)


# ============================================================================
# Channel coding
# ============================================================================


class TestLdpcCode:
    """Systematic repeat-accumulate LDPC code."""

    @pytest.fixture
    def code(self) -> LdpcCode:
        return make_channel_code(CodeSpec())

    def test_dimensions(self, code):
        assert (code.n, code.k) == (648, 432)
        assert code.rate == pytest.approx(2 / 3)

    def test_codewords_satisfy_parity_checks(self, code, rng):
        info = rng.integers(0, 2, (3, code.k))
        codewords = code.encode(info)
        assert np.array_equal(codewords[:, : code.k], info)
        assert not np.any(code.syndrome(codewords))

    def test_decoder_corrects_weak_wrong_bit(self, code, rng):
        info = rng.integers(0, 2, (1, code.k))
        codeword = code.encode(info)[0]
        llr = 4.0 * (1 - 2 * codeword.astype(float))
        llr[0] = -1.0 * (1 - 2 * float(codeword[0]))
        result = code.decode(llr)
        assert result.converged.all()
        assert np.array_equal(result.info_bits[0], info[0])

    def test_wrong_block_size_rejected(self, code):
        with pytest.raises(DimensionError):
            code.encode(np.zeros((1, code.k + 1)))


# ============================================================================
# Framing
# ============================================================================


class TestQpsk:
    def test_gray_mapping(self):
        symbols = qpsk_map([0, 0, 1, 0, 0, 1, 1, 1])
        expected = np.array([1 + 1j, -1 + 1j, 1 - 1j, -1 - 1j]) / np.sqrt(2)
        assert np.allclose(symbols, expected)

    def test_odd_bit_count_rejected(self):
        with pytest.raises(DimensionError, match="even"):
            qpsk_map([0, 1, 1])

    def test_llr_signs_follow_bits(self):
        llr = qpsk_llr(qpsk_map([0, 1]), noise_variance=0.1)
        assert llr[0] > 0 and llr[1] < 0


class TestFrameBuilder:
    """Pilot, payload and filler layout."""

    def test_capacity_in_whole_code_blocks(self, coded_config):
        builder = FrameBuilder(coded_config)
        assert builder.coded_capacity_bits == 1536
        assert builder.capacity_bits == 2 * 432

    def test_frame_has_unit_modulus_cells(self, coded_config, make_frame):
        frame, _ = make_frame(coded_config)
        assert np.allclose(np.abs(frame.cells), 1.0)

    def test_pilots_deterministic_in_seed(self, small_config):
        first = FrameBuilder(small_config, seed=5).pilot_symbols()
        second = FrameBuilder(small_config, seed=5).pilot_symbols()
        other = FrameBuilder(small_config, seed=6).pilot_symbols()
        assert np.array_equal(first, second)
        assert not np.array_equal(first, other)

    def test_pilots_placed_on_mask(self, small_config, make_frame):
        frame, _ = make_frame(small_config, seed=5)
        pilots = FrameBuilder(small_config, seed=5).pilot_symbols()
        assert np.array_equal(frame.cells[frame.pilot_mask], pilots)

    def test_payload_beyond_capacity_rejected(self, coded_config):
        builder = FrameBuilder(coded_config)
        with pytest.raises(CapacityError) as excinfo:
            builder.build(np.zeros(builder.capacity_bits + 1, dtype=np.uint8))
        assert excinfo.value.capacity_bits == 864


# ============================================================================
# Transmitter
# ============================================================================


class TestTransmitter:
    """OFDM modulation, beamforming and pre-distortion."""

    def test_frame_length_and_demodulation(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        samples = to_time_domain(frame, small_config)
        assert samples.shape == (small_config.frame_length,)
        assert np.allclose(from_time_domain(samples, small_config), frame.cells)

    def test_preamble_halves_repeat(self, small_config):
        body = preamble_body(small_config, seed=2)
        half = small_config.num_subcarriers // 2
        assert np.allclose(body[:half], body[half:])

    def test_cyclic_prefix_copies_symbol_tail(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        samples = to_time_domain(frame, small_config)
        length, cp = small_config.symbol_length, small_config.cp_length
        symbol = samples[length : 2 * length]
        assert np.allclose(symbol[:cp], symbol[-cp:])

    def test_beamforming_sums_steering_vectors(self):
        geometry = UlaGeometry(4, 27.5e9)
        beams = [
            transmit_steering_vector(geometry, 0.0),
            transmit_steering_vector(geometry, np.radians(30.0)),
        ]
        stream = np.arange(5, dtype=complex)
        signals = apply_tx_beamforming(stream, beams)
        assert signals.shape == (4, 5)
        assert np.allclose(signals[:, 1], beams[0].weights + beams[1].weights)

    def test_predistortion_of_ideal_front_end_is_identity(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        samples = to_time_domain(frame, small_config)
        cfr = np.ones((2, small_config.num_subcarriers))
        out = apply_tx_predistortion(samples, cfr, small_config)
        assert out.shape == (2, len(samples))
        assert np.allclose(out[1], samples, rtol=1e-5, atol=1e-9)

    def test_predistortion_inverts_a_gain(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        samples = to_time_domain(frame, small_config)
        out = apply_tx_predistortion(samples, 2.0 * np.ones((1, 64)), small_config)
        assert np.allclose(out[0], samples / 2, rtol=1e-5, atol=1e-9)

    def test_weak_front_end_rejected(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        samples = to_time_domain(frame, small_config)
        cfr = np.ones((1, 64))
        cfr[0, 7] = 0.0
        with pytest.raises(CalibrationError) as excinfo:
            apply_tx_predistortion(samples, cfr, small_config)
        assert excinfo.value.bin_index == 7
