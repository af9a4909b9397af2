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

"""End-to-end runs of the complete chain on the bundled scenarios.

Trials at different sigma_tau share a point index, so they see the same
payload, noise and normalized delay draws; only the delay scale changes.
"""

from dataclasses import replace

import numpy as np
import pytest

from mimoisac.core.channel import HardwareResponse
from mimoisac.core.metrics import evm
from mimoisac.core.paths import Paths
from mimoisac.core.runner import (
    load_scenario,
    radar_cube,
    reference_peak,
    run_link,
    run_scenario_replay,
    run_sweep,
    run_trial,
    trial_streams,
)


pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def sweep_trial():
    scenario = load_scenario(Paths.scenario("sigma_tau_sweep.yaml"))
    reference = reference_peak(scenario)
    cache = {}

    def trial(sigma_tau_samples: float, trial_index: int = 0) -> dict:
        key = (sigma_tau_samples, trial_index)
        if key not in cache:
            record = run_trial(scenario, 0, trial_index, sigma_tau_samples, reference)
            assert record.ok, record.error
            cache[key] = record.metrics
        return cache[key]

    return trial


def mean_metric(trial, sigma_tau_samples, name, trials):
    return float(np.mean([trial(sigma_tau_samples, t)[name] for t in range(trials)]))


# ============================================================================
# Loopback
# ============================================================================


class TestLoopback:
    """Zero offsets, ideal back ends, one LoS path and no noise."""

    def test_clean_link(self):
        scenario = load_scenario(Paths.scenario("sigma_tau_sweep.yaml"))
        impairments = replace(
            scenario.impairments, noise=replace(scenario.impairments.noise, mode="none")
        )
        scenario = replace(scenario, impairments=impairments, genie_decoding=False)
        outcome = run_link(scenario, trial_streams(0, 0, 0), HardwareResponse.ideal(8))

        assert outcome.decoded.coded_errors == 0
        assert outcome.decoded.uncoded_errors == 0
        assert evm(outcome.combined, outcome.frame).mean_db <= -100.0

        cube = radar_cube(scenario, outcome)
        assert cube.peak_index() == (0, 0, 16)


# ============================================================================
# Delay mismatch sweep
# ============================================================================


class TestDelayMismatch:
    """Communication and radar quality against the receive-channel delay spread."""

    def test_small_mismatch_is_benign(self, sweep_trial):
        for t in range(3):
            metrics = sweep_trial(1e-3, t)
            assert metrics["ber"] == 0.0
            assert metrics["pplr_db"] >= -0.5

    def test_link_survives_one_sample_of_mismatch(self, sweep_trial):
        assert sweep_trial(1.0)["ber"] == 0.0

    def test_link_survives_mismatch_inside_cyclic_prefix(self, sweep_trial):
        for t in range(4):
            assert sweep_trial(1e2, t)["ber"] == 0.0

    def test_link_breaks_beyond_cyclic_prefix(self, sweep_trial):
        metrics = sweep_trial(1e3)
        assert metrics["uncoded_ber"] > 0.0
        assert metrics["ber"] > 0.0

    def test_peak_power_crosses_three_db(self, sweep_trial):
        assert mean_metric(sweep_trial, 1e-2, "pplr_db", 4) > -3.0
        assert mean_metric(sweep_trial, 1.2e-1, "pplr_db", 6) < -3.0
        assert mean_metric(sweep_trial, 1.0, "pplr_db", 6) < -6.0

    def test_sir_flat_at_tiny_mismatch(self, sweep_trial):
        plateau = mean_metric(sweep_trial, 1e-6, "sir_db", 3)
        assert mean_metric(sweep_trial, 10**-3.25, "sir_db", 3) == pytest.approx(plateau, abs=1.0)

    def test_sir_drops_once_phases_spread(self, sweep_trial):
        plateau = mean_metric(sweep_trial, 1e-6, "sir_db", 3)
        assert plateau - mean_metric(sweep_trial, 1e-2, "sir_db", 3) >= 8.0
        assert sweep_trial(1e-1)["sir_db"] < sweep_trial(1e-4)["sir_db"]

    def test_azimuth_sidelobes_react_first(self, sweep_trial):
        clean, skewed = sweep_trial(1e-6), sweep_trial(1e-2)
        azimuth_change = abs(skewed["azimuth_pslr_db"] - clean["azimuth_pslr_db"])
        range_change = abs(skewed["range_pslr_db"] - clean["range_pslr_db"])
        assert azimuth_change > range_change

    def test_phase_std_columns(self, sweep_trial):
        metrics = sweep_trial(1e-3)
        assert metrics["sigma_theta_deg"] == pytest.approx(2.70, abs=0.02)
        assert metrics["sigma_theta_wrapped_deg"] == pytest.approx(2.70, abs=0.05)


class TestSweep:
    def test_scheduling_does_not_change_records(self):
        scenario = load_scenario(Paths.scenario("sigma_tau_sweep.yaml"))
        scenario = replace(scenario, sweep=replace(scenario.sweep, values=(1e-2,), trials=2, workers=1))
        inline = run_sweep(scenario, progress=False)
        pooled = run_sweep(
            replace(scenario, sweep=replace(scenario.sweep, workers=2)), progress=False
        )
        assert [r.trial_index for r in inline.records] == [0, 1]
        assert [r.metrics for r in pooled.records] == [r.metrics for r in inline.records]
        assert inline.summaries[0].trials == 2
        assert inline.failure_rate == 0.0


# ============================================================================
# Scenario replay
# ============================================================================


@pytest.fixture(scope="module")
def replay(tmp_path_factory):
    scenario = load_scenario(Paths.scenario("replay.yaml"))
    return run_scenario_replay(scenario, tmp_path_factory.mktemp("replay"))


class TestReplay:
    def test_files(self, replay):
        names = {path.name for path in replay.files}
        assert {
            "sync_report.csv",
            "sync_report.json",
            "ground_truth.json",
            "constellation_zf_ch0.csv",
            "constellation_mrc.csv",
            "range_doppler.csv",
            "range_azimuth.csv",
            "cube.f32",
            "cube.f32.json",
        } <= names
        assert all(path.exists() for path in replay.files)

    def test_cube_shape(self, replay):
        assert replay.cube.values.shape == (256, 64, 32)

    def test_direct_path_peak(self, replay):
        range_bin, doppler_bin, azimuth_bin = replay.cube.peak_index()
        assert min(range_bin, 256 - range_bin) <= 1
        assert min(doppler_bin, 64 - doppler_bin) <= 1
        sine = np.sin(replay.cube.azimuths[azimuth_bin])
        assert abs(sine - np.sin(np.radians(3.0))) <= 1 / 16

    def test_reflector_visible_in_azimuth(self, replay):
        range_bin, doppler_bin, _ = replay.cube.peak_index()
        profile = np.abs(replay.cube.values[range_bin, doppler_bin, :])
        sines = np.sin(replay.cube.azimuths)
        side = np.flatnonzero(sines < -0.15)
        strongest = side[np.argmax(profile[side])]
        assert abs(sines[strongest] - np.sin(np.radians(-20.0))) <= 1 / 16

    def test_sync_report(self, replay):
        report = replay.sync_report
        assert report["global"]["cfo_hz"] == pytest.approx(15.5e3, abs=3e3)
        assert report["global"]["sfo_ppm"] == pytest.approx(-4.16, abs=0.05)
        assert report["ground_truth"]["cfo_hz"] == pytest.approx(15.5e3)
        channels = report["channels"]
        assert len(channels) == 8
        assert all("coarse_residual_sto_ns" in row for row in channels)
        residual = [row["residual_sto_ns"] for row in channels if row["residual_sto_ns"] is not None]
        assert len(residual) == 8
        assert np.std(residual) > 0
