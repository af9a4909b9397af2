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

"""Tests for array geometry and steering vectors."""

import numpy as np
import pytest

from mimoisac.constants import SPEED_OF_LIGHT
from mimoisac.core.array import (
    GeometryError,
    UlaGeometry,
    azimuth_grid,
    path_length_difference,
    receive_element_phases,
    receive_steering_vector,
    steering_matrix,
    transmit_element_phases,
    transmit_steering_vector,
)


# ============================================================================
# Geometry
# ============================================================================


class TestUlaGeometry:
    """Half-wavelength array centred on the origin."""

    def test_positions_centred_with_half_wavelength_spacing(self, rx_geometry):
        positions = rx_geometry.element_x_positions
        assert np.sum(positions) == pytest.approx(0.0, abs=1e-15)
        assert np.allclose(np.diff(positions), rx_geometry.wavelength / 2)

    def test_wavelength(self, rx_geometry):
        assert rx_geometry.wavelength == pytest.approx(SPEED_OF_LIGHT / 27.5e9)

    @pytest.mark.parametrize("num_elements, carrier", [(0, 27.5e9), (4, 0.0)])
    def test_invalid_arrays_rejected(self, num_elements, carrier):
        with pytest.raises(GeometryError):
            UlaGeometry(num_elements, carrier)

    def test_path_length_difference_sign(self, tx_geometry):
        """Elements on the positive x side are closer to a target at positive angles."""
        last = tx_geometry.num_elements - 1
        assert path_length_difference(tx_geometry, last, np.pi / 6) < 0
        assert path_length_difference(tx_geometry, 0, np.pi / 6) > 0

    def test_path_length_difference_rejects_bad_input(self, tx_geometry):
        with pytest.raises(GeometryError):
            path_length_difference(tx_geometry, 4, 0.0)
        with pytest.raises(GeometryError, match="outside"):
            path_length_difference(tx_geometry, 0, np.pi / 2)


# ============================================================================
# Steering
# ============================================================================


class TestSteering:
    """Transmit beamsteering and receive Fourier beamforming."""

    def test_broadside_weights_are_ones(self, tx_geometry, rx_geometry):
        vector = transmit_steering_vector(tx_geometry, 0.0)
        assert np.array_equal(vector.weights, np.ones(4, dtype=complex))
        vector = receive_steering_vector(rx_geometry, 0.0)
        assert np.array_equal(vector.weights, np.ones(8, dtype=complex))

    def test_transmit_gain_at_matching_angle(self, tx_geometry):
        dod = np.radians(30.0)
        weights = transmit_steering_vector(tx_geometry, dod).weights
        gain = np.sum(transmit_element_phases(tx_geometry, dod) * weights)
        assert gain == pytest.approx(4.0)

    def test_receive_beam_peaks_at_doa(self, rx_geometry):
        grid = azimuth_grid(32)
        doa = grid[20]
        response = steering_matrix(rx_geometry, grid) @ receive_element_phases(rx_geometry, doa)
        assert int(np.argmax(np.abs(response))) == 20
        assert abs(response[20]) == pytest.approx(8.0)

    def test_steering_matrix_rejects_endfire(self, rx_geometry):
        with pytest.raises(GeometryError):
            steering_matrix(rx_geometry, np.array([0.0, np.pi / 2]))


class TestAzimuthGrid:
    def test_uniform_in_sine(self):
        grid = azimuth_grid(32)
        assert grid[0] == pytest.approx(-np.pi / 2)
        assert np.all(grid < np.pi / 2)
        assert np.allclose(np.diff(np.sin(grid)), 2 / 32)

    def test_uniform_in_angle(self):
        grid = azimuth_grid(16, uniform_in_sine=False)
        assert np.allclose(np.diff(grid), np.pi / 16)

    def test_empty_grid_rejected(self):
        with pytest.raises(GeometryError):
            azimuth_grid(0)
