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
import logging

import numpy as np

from mimoisac.constants import SPEED_OF_LIGHT
from mimoisac.core.errors import MimoIsacError


logger = logging.getLogger(__name__)

HALF_PI = np.pi / 2


class GeometryError(MimoIsacError):
    """Invalid element index or angle for an array operation."""


def _check_angle(angle: float) -> None:
    if not -HALF_PI <= angle < HALF_PI:
        raise GeometryError(f"Angle {angle!r} rad outside [-pi/2, pi/2)")


@dataclass(frozen=True)
class UlaGeometry:
    """Uniform linear array along x with half-wavelength spacing, centred at 0.

    Attributes:
        num_elements: Number of antenna elements.
        carrier_frequency: Carrier frequency in Hz.
    """

    num_elements: int
    carrier_frequency: float
    element_x_positions: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.num_elements < 1:
            raise GeometryError(
                f"num_elements must be positive, got {self.num_elements}"
            )
        if self.carrier_frequency <= 0:
            raise GeometryError(
                f"carrier_frequency must be positive, got {self.carrier_frequency}"
            )
        offsets = (-self.num_elements + 1) / 2 + np.arange(self.num_elements)
        positions = (self.wavelength / 2) * offsets
        positions.setflags(write=False)
        object.__setattr__(self, "element_x_positions", positions)

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency

    @property
    def normalized_positions(self) -> np.ndarray:
        """Element positions in wavelengths (x_n / lambda0)."""
        return self.element_x_positions / self.wavelength


@dataclass(frozen=True)
class SteeringVector:
    """Unit-magnitude complex weights for one steering angle."""

    angle: float
    weights: np.ndarray

    @property
    def num_elements(self) -> int:
        return len(self.weights)


def path_length_difference(
    geometry: UlaGeometry, element_index: int, angle: float
) -> float:
    """Return the path-length difference of one element w.r.t. the array centre.

    Arguments:
        geometry: The array.
        element_index: Element index in [0, num_elements).
        angle: Departure or arrival angle in radians, in [-pi/2, pi/2).

    Returns:
        float: Length difference in meters. Divide by the speed of light for the
        per-element delay.

    Raises:
        GeometryError: If the index or the angle is out of range.
    """
    if not 0 <= element_index < geometry.num_elements:
        raise GeometryError(
            f"Element index {element_index} outside [0, {geometry.num_elements})"
        )
    _check_angle(angle)
    return -float(geometry.element_x_positions[element_index]) * float(np.sin(angle))


def _phase_ramp(geometry: UlaGeometry, angle: float, sign: float) -> np.ndarray:
    return np.exp(sign * 2j * np.pi * geometry.normalized_positions * np.sin(angle))


def transmit_steering_vector(geometry: UlaGeometry, dod: float) -> SteeringVector:
    """Beamsteering weights exp(-i 2 pi (x_n / lambda0) sin(dod)) for one DoD."""
    _check_angle(dod)
    weights = _phase_ramp(geometry, dod, -1.0)
    return SteeringVector(angle=dod, weights=weights)


def receive_steering_vector(geometry: UlaGeometry, doa: float) -> SteeringVector:
    """Fourier beamforming weights exp(+i 2 pi (x_n / lambda0) sin(doa))."""
    _check_angle(doa)
    weights = _phase_ramp(geometry, doa, +1.0)
    return SteeringVector(angle=doa, weights=weights)


def receive_element_phases(geometry: UlaGeometry, doa: float) -> np.ndarray:
    """Per-element phase factors a plane wave from ``doa`` imposes on the array.

    These are the conjugate of the receive steering vector, so that Fourier
    beamforming with :func:`receive_steering_vector` peaks at the true DoA.
    """
    return np.conj(receive_steering_vector(geometry, doa).weights)


def transmit_element_phases(geometry: UlaGeometry, dod: float) -> np.ndarray:
    """Per-element propagation phase factors towards ``dod``.

    Their product with :func:`transmit_steering_vector` sums to ``num_elements``
    when the steering angle matches.
    """
    return np.conj(transmit_steering_vector(geometry, dod).weights)


def steering_matrix(
    geometry: UlaGeometry, angles: np.ndarray, receive: bool = True
) -> np.ndarray:
    """Stack steering vectors for many angles into an (angles x elements) matrix."""
    angles = np.asarray(angles, dtype=float)
    if np.any(angles < -HALF_PI) or np.any(angles >= HALF_PI):
        raise GeometryError("Steering angles must lie in [-pi/2, pi/2)")
    sign = 1.0 if receive else -1.0
    return np.exp(
        sign
        * 2j
        * np.pi
        * np.sin(angles)[:, None]
        * geometry.normalized_positions[None, :]
    )


def azimuth_grid(num_points: int, uniform_in_sine: bool = True) -> np.ndarray:
    """Evaluation grid of DoAs over [-pi/2, pi/2).

    Arguments:
        num_points: Number of evaluated angles.
        uniform_in_sine: Space the points uniformly in sin(angle) over [-1, 1)
            (the natural Fourier beamforming grid); otherwise uniformly in angle.

    Returns:
        np.ndarray: Angles in radians, ascending.
    """
    if num_points < 1:
        raise GeometryError(f"num_points must be positive, got {num_points}")
    if uniform_in_sine:
        sines = -1.0 + 2.0 * np.arange(num_points) / num_points
        return np.arcsin(sines)
    return -HALF_PI + np.pi * np.arange(num_points) / num_points
