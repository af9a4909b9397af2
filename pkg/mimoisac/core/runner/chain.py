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
import logging

import numpy as np

from mimoisac.core.array import azimuth_grid, transmit_steering_vector
from mimoisac.core.channel import (
    ChannelRealization,
    HardwareResponse,
    ImpairmentSpec,
    make_abe_bank,
    make_afe_bank,
    propagate,
)
from mimoisac.core.comm import (
    CommCfr,
    DecodeOutcome,
    demod_decode_reencode,
    estimate_cfr,
    mrc_combine,
    zf_equalize,
)
from mimoisac.core.radar import (
    RadarCfr,
    RangeAzimuthCut,
    build_radar_cfr,
    make_window,
    zero_doppler_cut,
)
from mimoisac.core.runner.config import ScenarioConfig
from mimoisac.core.sync import SyncResult, pilot_values, synchronize
from mimoisac.core.waveform import (
    FrameBuilder,
    FrameGrid,
    apply_tx_beamforming,
    apply_tx_predistortion,
    to_time_domain,
)


logger = logging.getLogger(__name__)

# Independent random streams of one trial.
PAYLOAD_STREAM, CHANNEL_STREAM, ABE_STREAM, AFE_STREAM, FRAME_STREAM = range(5)


@dataclass(frozen=True)
class LinkOutcome:
    """Everything one transmission produced on its way through the receiver."""

    frame: FrameGrid
    payload_bits: np.ndarray
    realization: ChannelRealization
    sync: SyncResult
    cfrs: list[CommCfr]
    combined: FrameGrid
    decoded: DecodeOutcome
    radar_cfr: RadarCfr
    abe: HardwareResponse


def trial_streams(seed: int, point: int, trial: int) -> list[np.random.SeedSequence]:
    """Child seed sequences of one (point, trial) work unit."""
    root = np.random.SeedSequence(seed, spawn_key=(point, trial))
    return root.spawn(5)


def run_link(
    scenario: ScenarioConfig,
    streams: list[np.random.SeedSequence],
    abe: HardwareResponse | None = None,
) -> LinkOutcome:
    """Transmit one frame, propagate it and run sync, comm and radar calibration.

    Arguments:
        scenario: Experiment description.
        streams: Seed sequences from :func:`trial_streams`.
        abe: Back-end responses; synthesized from the scenario profile when None.
    """
    config = scenario.ofdm_config()
    geometry_tx = scenario.tx_geometry()
    geometry_rx = scenario.rx_geometry()
    frame_seed = int(streams[FRAME_STREAM].generate_state(1)[0])

    builder = FrameBuilder(config, frame_seed)
    payload = np.random.default_rng(streams[PAYLOAD_STREAM]).integers(
        0, 2, builder.capacity_bits, dtype=np.uint8
    )
    frame = builder.build(payload)
    beams = [
        transmit_steering_vector(geometry_tx, float(np.radians(angle)))
        for angle in scenario.arrays.tx_beams_deg
    ]
    tx = apply_tx_beamforming(to_time_domain(frame, config), beams)

    impairments = scenario.impairments
    afe = None
    if impairments.afe_profile != "ideal":
        afe = make_afe_bank(
            geometry_tx.num_elements,
            impairments.afe_profile,
            np.random.default_rng(streams[AFE_STREAM]),
            config.sampling_period,
        )
        if impairments.predistortion:
            tx = apply_tx_predistortion(tx, afe.cfr(config.subcarrier_frequencies), config)
    if abe is None:
        abe = make_abe_bank(
            geometry_rx.num_elements,
            impairments.abe_profile,
            np.random.default_rng(streams[ABE_STREAM]),
            config.sampling_period,
        )

    spec = ImpairmentSpec(
        sto=impairments.sto_ns * 1e-9,
        cfo=impairments.cfo_hz,
        common_phase=impairments.common_phase_rad,
        sfo=impairments.sfo_ppm * 1e-6,
        noise=scenario.noise_spec(),
        abe=abe,
        afe=afe,
        intermediate_frequency=impairments.intermediate_frequency_hz,
    )
    realization = propagate(
        tx,
        geometry_tx,
        geometry_rx,
        scenario.path_set(),
        spec,
        np.random.default_rng(streams[CHANNEL_STREAM]),
        sampling_period=config.sampling_period,
    )

    sync = synchronize(realization.samples, config, frame_seed, scenario.sync_options())
    pilots = pilot_values(sync.frames[0], config)
    cfrs = [estimate_cfr(received, pilots, config) for received in sync.frames]
    combined = mrc_combine(sync.frames, cfrs)
    decoded = demod_decode_reencode(
        combined,
        config,
        len(payload),
        frame_seed,
        reference_bits=payload,
        reference_frame=frame,
        genie=scenario.genie_decoding,
    )

    abe_cfr = abe.cfr(config.subcarrier_frequencies, impairments.intermediate_frequency_hz)
    radar_cfr = build_radar_cfr(sync.frames, decoded.xhat, abe_cfr)
    return LinkOutcome(
        frame=frame,
        payload_bits=payload,
        realization=realization,
        sync=sync,
        cfrs=cfrs,
        combined=combined,
        decoded=decoded,
        radar_cfr=radar_cfr,
        abe=abe,
    )


def single_channel_zf(outcome: LinkOutcome, channel: int = 0) -> FrameGrid:
    return zf_equalize(outcome.sync.frames[channel], outcome.cfrs[channel])


def range_azimuth_cut(
    scenario: ScenarioConfig, radar_cfr: RadarCfr, window_kind: str | None = None
) -> RangeAzimuthCut:
    """Zero-Doppler range-azimuth cut with the scenario's windows.

    ``window_kind`` replaces the window on all three axes when given.
    """
    windows = scenario.windows
    _, num_subcarriers, num_symbols = radar_cfr.cells.shape
    num_rx = scenario.arrays.num_rx
    range_kind, doppler_kind, azimuth_kind = (
        (windows.range, windows.doppler, windows.azimuth)
        if window_kind is None
        else (window_kind,) * 3
    )
    return zero_doppler_cut(
        radar_cfr,
        scenario.rx_geometry(),
        azimuth_grid(scenario.arrays.azimuth_oversampling * num_rx),
        make_window(range_kind, num_subcarriers, windows.sidelobe_db),
        make_window(doppler_kind, num_symbols, windows.sidelobe_db),
        make_window(azimuth_kind, num_rx, windows.sidelobe_db),
        windows.range_oversampling,
    )
