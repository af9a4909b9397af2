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

from mimoisac.core.errors import ConfigurationError
from mimoisac.core.waveform import FrameBuilder, FrameGrid, OfdmConfig, qpsk_llr
from mimoisac.core.waveform.coding import LLR_CLIP


logger = logging.getLogger(__name__)

NOISE_FLOOR = 1e-12


@dataclass(frozen=True)
class DecodeOutcome:
    """Receiver output of one frame.

    Attributes:
        payload_bits: Decoded information bits.
        xhat: Re-encoded transmit-frame estimate, pilots included.
        uncoded_errors: Hard-decision errors on the coded bits, or None.
        coded_errors: Errors on the payload bits after decoding, or None.
        num_coded_bits: Coded bits carried by the frame.
        converged: Every code block had a zero syndrome.
        noise_variance: Decision-directed noise variance used for the LLRs.
        genie: ``xhat`` is the true transmit frame.
    """

    payload_bits: np.ndarray
    xhat: FrameGrid
    uncoded_errors: int | None
    coded_errors: int | None
    num_coded_bits: int
    converged: bool
    noise_variance: float
    genie: bool = False

    @property
    def uncoded_ber(self) -> float | None:
        if self.uncoded_errors is None or self.num_coded_bits == 0:
            return None
        return self.uncoded_errors / self.num_coded_bits

    @property
    def coded_ber(self) -> float | None:
        if self.coded_errors is None or len(self.payload_bits) == 0:
            return None
        return self.coded_errors / len(self.payload_bits)


def decision_directed_noise(symbols: np.ndarray) -> float:
    """Mean squared distance to the nearest QPSK point."""
    if symbols.size == 0:
        return NOISE_FLOOR
    hard = (np.sign(symbols.real) + 1j * np.sign(symbols.imag)) / np.sqrt(2)
    return max(float(np.mean(np.abs(symbols - hard) ** 2)), NOISE_FLOOR)


def demod_decode_reencode(
    frame: FrameGrid,
    config: OfdmConfig,
    num_payload_bits: int,
    seed: int = 0,
    *,
    reference_bits: np.ndarray | None = None,
    reference_frame: FrameGrid | None = None,
    genie: bool = False,
) -> DecodeOutcome:
    """Demodulate, decode and re-encode an equalized frame.

    Arguments:
        frame: Equalized grid (ZF or MRC output); erased cells give zero LLRs.
        config: OFDM parameters.
        num_payload_bits: Payload length the frame was built with.
        seed: Seed of pilots and filler.
        reference_bits: True payload, for error counting.
        reference_frame: True transmit frame, required in genie mode.
        genie: Return ``reference_frame`` as the frame estimate.

    Returns:
        DecodeOutcome: Decoded bits, frame estimate and error counts.
    """
    if genie and reference_frame is None:
        raise ConfigurationError("Genie decoding needs the true transmit frame")
    builder = FrameBuilder(config, seed)
    code = builder.code
    blocks = builder.num_blocks(num_payload_bits)
    coded_cells = blocks * code.n // 2

    data = frame.cells[~builder.pilot_mask][:coded_cells]
    noise_variance = decision_directed_noise(data)
    llr = np.clip(qpsk_llr(data, noise_variance), -LLR_CLIP, LLR_CLIP)
    if frame.erased is not None:
        erased = frame.erased[~builder.pilot_mask][:coded_cells]
        llr[np.repeat(erased, 2)] = 0.0

    if blocks:
        result = code.decode(llr.reshape(blocks, code.n), config.code.max_iterations)
        info = result.info_bits
        converged = bool(np.all(result.converged))
    else:
        info = np.zeros((0, code.k), dtype=np.uint8)
        converged = True
    if not converged:
        logger.warning(
            "Decoder did not converge on %d of %d blocks",
            int(np.count_nonzero(~result.converged)),
            blocks,
        )
    payload = info.reshape(-1)[:num_payload_bits].astype(np.uint8)

    uncoded_errors = coded_errors = None
    if reference_bits is not None:
        reference_bits = np.asarray(reference_bits, dtype=np.uint8).reshape(-1)
        true_coded = builder.encode_payload(reference_bits).reshape(-1)
        hard = (llr < 0).astype(np.uint8)
        uncoded_errors = int(np.count_nonzero(hard != true_coded))
        coded_errors = int(np.count_nonzero(payload != reference_bits))

    if genie:
        xhat = reference_frame
    else:
        xhat = builder.assemble(code.encode(info) if blocks else np.zeros(0, dtype=np.uint8))
    return DecodeOutcome(
        payload_bits=payload,
        xhat=xhat,
        uncoded_errors=uncoded_errors,
        coded_errors=coded_errors,
        num_coded_bits=2 * coded_cells,
        converged=converged,
        noise_variance=noise_variance,
        genie=genie,
    )
