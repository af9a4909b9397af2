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

"""Tests for channel estimation, equalization and decoding."""

import numpy as np
import pytest

from mimoisac.core.comm import (
    DegeneratePilotError,
    decision_directed_noise,
    demod_decode_reencode,
    estimate_cfr,
    mrc_combine,
    zf_equalize,
)
from mimoisac.core.comm.estimation import CommCfr
from mimoisac.core.errors import ConfigurationError, DimensionError
from mimoisac.core.sync import pilot_values


def pilots_of(frame, config):
    return pilot_values(frame, config)


# ============================================================================
# Estimation
# ============================================================================


class TestEstimateCfr:
    """Least-squares pilot estimates interpolated to every cell."""

    def test_flat_channel(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        h = 0.5 + 0.5j
        cfr = estimate_cfr(frame.with_cells(frame.cells * h), pilots_of(frame, small_config), small_config)
        assert cfr.shape == (64, 16)
        assert np.allclose(cfr.cells, h)

    def test_linear_phase_interpolated_between_pilots(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        offsets = small_config.subcarrier_offsets
        slope = 0.01
        channel = np.exp(1j * slope * offsets)[:, None] * np.ones((1, 16))
        cfr = estimate_cfr(
            frame.with_cells(frame.cells * channel), pilots_of(frame, small_config), small_config
        )
        odd = (offsets % 2 == 1) & (np.abs(offsets) < 30)
        assert np.allclose(cfr.cells[odd], channel[odd], atol=1e-3)

    def test_zero_pilot_rejected(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        pilots = pilots_of(frame, small_config).copy()
        pilots[2, 1] = 0
        with pytest.raises(DegeneratePilotError, match="subcarrier 4, symbol 2"):
            estimate_cfr(frame, pilots, small_config)

    def test_pilot_shape_checked(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        with pytest.raises(DimensionError):
            estimate_cfr(frame, np.ones((4, 4)), small_config)


# ============================================================================
# Equalization
# ============================================================================


class TestEqualization:
    def test_zf_recovers_cells(self, small_config, make_frame, rng):
        frame, _ = make_frame(small_config)
        h = rng.standard_normal((64, 16)) + 1j * rng.standard_normal((64, 16))
        equalized = zf_equalize(frame.with_cells(frame.cells * h), CommCfr(h))
        assert np.allclose(equalized.cells, frame.cells)
        assert equalized.num_erased == 0

    def test_zf_erases_dead_cells(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        h = np.ones((64, 16), dtype=complex)
        h[3, 5] = 0
        equalized = zf_equalize(frame, CommCfr(h))
        assert equalized.num_erased == 1
        assert equalized.cells[3, 5] == 0

    def test_mrc_combines_channels(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        gains = [0.5 * np.ones((64, 16)), (1 - 2j) * np.ones((64, 16))]
        frames = [frame.with_cells(frame.cells * g) for g in gains]
        combined = mrc_combine(frames, [CommCfr(g) for g in gains])
        assert np.allclose(combined.cells, frame.cells)

    @pytest.mark.parametrize("seed", range(3))
    def test_mrc_beats_every_single_channel(self, desk_config, make_frame, seed):
        frame, _ = make_frame(desk_config)
        rng = np.random.default_rng(seed)
        shape = frame.cells.shape
        gains = [g * np.exp(2j * np.pi * rng.uniform()) * np.ones(shape) for g in (1.0, 0.7, 0.4)]
        frames = []
        for g in gains:
            noise = 0.3 * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
            frames.append(frame.with_cells(frame.cells * g + noise))
        cfrs = [CommCfr(g) for g in gains]

        def error(grid):
            return np.mean(np.abs(grid.cells - frame.cells) ** 2)

        combined = error(mrc_combine(frames, cfrs))
        singles = [error(zf_equalize(f, c)) for f, c in zip(frames, cfrs)]
        assert combined <= min(singles)
        # Error variance scales with 1 / sum |h|^2.
        assert combined == pytest.approx(0.09 / 1.65, rel=0.1)

    def test_mrc_of_one_channel_is_zf(self, small_config, make_frame, rng):
        frame, _ = make_frame(small_config)
        h = rng.standard_normal((64, 16)) + 1j * rng.standard_normal((64, 16))
        received = frame.with_cells(frame.cells * h + 0.1)
        combined = mrc_combine([received], [CommCfr(h)])
        assert np.allclose(combined.cells, zf_equalize(received, CommCfr(h)).cells, rtol=1e-12, atol=1e-12)

    def test_mrc_needs_matching_inputs(self, small_config, make_frame):
        frame, _ = make_frame(small_config)
        with pytest.raises(DimensionError):
            mrc_combine([frame, frame], [CommCfr(np.ones((64, 16)))])
        with pytest.raises(DimensionError):
            mrc_combine([], [])


# ============================================================================
# Decoding
# ============================================================================


class TestDecode:
    """Demodulation, LDPC decoding and re-encoding of the frame estimate."""

    def test_clean_frame_decoded_and_reencoded(self, coded_config, make_frame):
        frame, bits = make_frame(coded_config)
        outcome = demod_decode_reencode(frame, coded_config, len(bits), frame.seed, reference_bits=bits)
        assert outcome.converged
        assert outcome.coded_ber == 0.0
        assert outcome.uncoded_ber == 0.0
        assert np.array_equal(outcome.payload_bits, bits)
        assert np.allclose(outcome.xhat.cells, frame.cells)

    def test_noisy_frame_decoded(self, coded_config, make_frame, rng):
        frame, bits = make_frame(coded_config)
        noise = 0.2 * (rng.standard_normal((64, 16)) + 1j * rng.standard_normal((64, 16)))
        outcome = demod_decode_reencode(
            frame.with_cells(frame.cells + noise), coded_config, len(bits), frame.seed,
            reference_bits=bits,
        )
        assert outcome.coded_ber == 0.0
        assert outcome.noise_variance == pytest.approx(0.08, rel=0.3)

    def test_erased_cells_decoded(self, coded_config, make_frame):
        frame, bits = make_frame(coded_config)
        erased = np.zeros(frame.cells.shape, dtype=bool)
        data_cells = np.argwhere(~frame.pilot_mask)[:3]
        erased[data_cells[:, 0], data_cells[:, 1]] = True
        damaged = frame.with_cells(np.where(erased, 0, frame.cells), erased=erased)
        outcome = demod_decode_reencode(damaged, coded_config, len(bits), frame.seed, reference_bits=bits)
        assert outcome.coded_ber == 0.0

    def test_genie_returns_reference_frame(self, coded_config, make_frame):
        frame, bits = make_frame(coded_config)
        outcome = demod_decode_reencode(
            frame, coded_config, len(bits), frame.seed, reference_frame=frame, genie=True
        )
        assert outcome.xhat is frame
        assert outcome.coded_ber is None

    def test_genie_needs_reference(self, coded_config, make_frame):
        frame, bits = make_frame(coded_config)
        with pytest.raises(ConfigurationError, match="true transmit frame"):
            demod_decode_reencode(frame, coded_config, len(bits), frame.seed, genie=True)

    def test_decision_directed_noise_floor(self):
        assert decision_directed_noise(np.array([(1 + 1j) / np.sqrt(2)])) == pytest.approx(1e-12)
