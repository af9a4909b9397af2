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

"""Shared fixtures for the MimoIsac test suite."""

import numpy as np
import pytest

from mimoisac.core.array import UlaGeometry
from mimoisac.core.paths import Paths
from mimoisac.core.runner import load_scenario
from mimoisac.core.waveform import CodeSpec, FrameBuilder, OfdmConfig


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs the complete link chain")


@pytest.fixture
def small_config() -> OfdmConfig:
    """Uncoded 64 x 16 frame at the desk bandwidth of 491.52 MHz."""
    return OfdmConfig(
        num_subcarriers=64,
        num_symbols=16,
        cp_length=16,
        subcarrier_spacing=7.68e6,
        code=CodeSpec.uncoded(),
    )


@pytest.fixture
def coded_config() -> OfdmConfig:
    """64 x 16 frame carrying two rate-2/3 LDPC blocks."""
    return OfdmConfig(
        num_subcarriers=64,
        num_symbols=16,
        cp_length=16,
        subcarrier_spacing=7.68e6,
    )


@pytest.fixture
def desk_config() -> OfdmConfig:
    return OfdmConfig(
        num_subcarriers=256,
        num_symbols=64,
        cp_length=64,
        subcarrier_spacing=1.92e6,
        code=CodeSpec.uncoded(),
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def rx_geometry() -> UlaGeometry:
    return UlaGeometry(num_elements=8, carrier_frequency=27.5e9)


@pytest.fixture
def tx_geometry() -> UlaGeometry:
    return UlaGeometry(num_elements=4, carrier_frequency=27.5e9)


@pytest.fixture
def make_frame():
    """Factory building a frame filled to capacity with random payload bits."""

    def build(config: OfdmConfig, seed: int = 3):
        builder = FrameBuilder(config, seed)
        bits = np.random.default_rng(seed).integers(
            0, 2, builder.capacity_bits, dtype=np.uint8
        )
        return builder.build(bits), bits

    return build


@pytest.fixture
def sweep_scenario():
    return load_scenario(Paths.scenario("sigma_tau_sweep.yaml"))


@pytest.fixture
def replay_scenario():
    return load_scenario(Paths.scenario("replay.yaml"))
