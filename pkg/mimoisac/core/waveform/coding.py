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
import scipy.sparse as sp

from mimoisac.core.errors import DimensionError
from mimoisac.core.waveform.config import CodeKind, CodeSpec


logger = logging.getLogger(__name__)

LLR_CLIP = 50.0
_TANH_FLOOR = 1e-30
_ATANH_LIMIT = 1.0 - 1e-15


@dataclass(frozen=True)
class DecodeResult:
    """Output of a batch decode.

    Attributes:
        info_bits: (blocks x k) decoded information bits.
        codewords: (blocks x n) hard-decision codewords.
        converged: Per-block flag, True when the syndrome is zero.
        iterations: Iterations run before all blocks converged or the cap hit.
    """

    info_bits: np.ndarray
    codewords: np.ndarray
    converged: np.ndarray
    iterations: int


class Uncoded:
    """Pass-through code with the same interface as :class:`LdpcCode`."""

    def __init__(self, block_length: int = 2) -> None:
        self.n = block_length
        self.k = block_length

    def encode(self, info_bits: np.ndarray) -> np.ndarray:
        return np.atleast_2d(np.asarray(info_bits, dtype=np.uint8))

    def decode(self, llr: np.ndarray, max_iterations: int = 0) -> DecodeResult:
        llr = np.atleast_2d(llr)
        bits = (llr < 0).astype(np.uint8)
        return DecodeResult(
            info_bits=bits,
            codewords=bits,
            converged=np.ones(len(bits), dtype=bool),
            iterations=0,
        )


class LdpcCode:
    """Systematic irregular repeat-accumulate LDPC code.

    The parity-check matrix is ``H = [H1 | H2]`` with a pseudo-random ``H1`` of
    fixed column weight and a dual-diagonal ``H2``, which makes encoding a
    running XOR over ``H1 u``.

    Arguments:
        block_length: Codeword length n.
        info_length: Information length k.
        seed: Seed of the ``H1`` construction.
        column_weight: Ones per ``H1`` column.
    """

    def __init__(
        self, block_length: int, info_length: int, seed: int = 0, column_weight: int = 3
    ) -> None:
        if not 0 < info_length < block_length:
            raise DimensionError(
                f"Need 0 < k < n, got k={info_length}, n={block_length}"
            )
        self.n = block_length
        self.k = info_length
        self.m = block_length - info_length
        weight = min(column_weight, self.m)

        rng = np.random.default_rng(seed)
        rows = np.concatenate(
            [rng.choice(self.m, size=weight, replace=False) for _ in range(self.k)]
        )
        cols = np.repeat(np.arange(self.k), weight)
        self.h1 = sp.csr_matrix(
            (np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(self.m, self.k)
        )

        diag = np.arange(self.m)
        sub = np.arange(1, self.m)
        h2_rows = np.concatenate([diag, sub])
        h2_cols = np.concatenate([diag, sub - 1]) + self.k
        all_rows = np.concatenate([rows, h2_rows])
        all_cols = np.concatenate([cols, h2_cols])
        self.h = sp.csr_matrix(
            (np.ones(len(all_rows), dtype=np.int64), (all_rows, all_cols)),
            shape=(self.m, self.n),
        )

        coo = self.h.tocoo()
        self._check_index = coo.row
        self._var_index = coo.col
        num_edges = len(coo.row)
        edges = np.arange(num_edges)
        ones = np.ones(num_edges)
        self._check_sum = sp.csr_matrix(
            (ones, (self._check_index, edges)), shape=(self.m, num_edges)
        )
        self._var_sum = sp.csr_matrix(
            (ones, (self._var_index, edges)), shape=(self.n, num_edges)
        )
        logger.debug(
            "Built LDPC code n=%d k=%d with %d edges", self.n, self.k, num_edges
        )

    @property
    def rate(self) -> float:
        return self.k / self.n

    def encode(self, info_bits: np.ndarray) -> np.ndarray:
        """Encode a (blocks x k) bit array into (blocks x n) codewords."""
        info = np.atleast_2d(np.asarray(info_bits, dtype=np.int64))
        if info.shape[1] != self.k:
            raise DimensionError(f"Expected {self.k} bits per block, got {info.shape[1]}")
        checks = (self.h1 @ info.T) % 2
        parity = np.cumsum(checks, axis=0) % 2
        return np.concatenate([info, parity.T], axis=1).astype(np.uint8)

    def syndrome(self, codewords: np.ndarray) -> np.ndarray:
        words = np.atleast_2d(np.asarray(codewords, dtype=np.int64))
        return ((self.h @ words.T) % 2).T

    def decode(self, llr: np.ndarray, max_iterations: int = 50) -> DecodeResult:
        """Sum-product decoding of (blocks x n) channel LLRs, log(P0/P1)."""
        channel = np.atleast_2d(np.asarray(llr, dtype=float))
        if channel.shape[1] != self.n:
            raise DimensionError(f"Expected {self.n} LLRs per block, got {channel.shape[1]}")
        channel = np.clip(channel, -LLR_CLIP, LLR_CLIP).T

        to_check = channel[self._var_index]
        to_var = np.zeros_like(to_check)
        total = channel
        hard = (total < 0).astype(np.int64)
        iterations = 0
        for iterations in range(1, max_iterations + 1):
            t = np.tanh(to_check / 2)
            negative = (t < 0).astype(float)
            log_abs = np.log(np.maximum(np.abs(t), _TANH_FLOOR))
            check_log = self._check_sum @ log_abs
            check_neg = self._check_sum @ negative
            magnitude = np.exp(check_log[self._check_index] - log_abs)
            parity = np.rint(check_neg[self._check_index] - negative) % 2
            extrinsic = np.where(parity > 0, -magnitude, magnitude)
            to_var = 2 * np.arctanh(np.clip(extrinsic, -_ATANH_LIMIT, _ATANH_LIMIT))

            total = channel + self._var_sum @ to_var
            to_check = total[self._var_index] - to_var
            hard = (total < 0).astype(np.int64)
            if not np.any((self.h @ hard) % 2):
                break

        codewords = hard.T.astype(np.uint8)
        converged = ~np.any(self.syndrome(codewords), axis=1)
        return DecodeResult(
            info_bits=codewords[:, : self.k],
            codewords=codewords,
            converged=converged,
            iterations=iterations,
        )


def make_channel_code(spec: CodeSpec) -> LdpcCode | Uncoded:
    if spec.kind is CodeKind.NONE:
        return Uncoded()
    info_length = int(spec.block_length * spec.rate)
    return LdpcCode(spec.block_length, info_length, seed=spec.construction_seed)
