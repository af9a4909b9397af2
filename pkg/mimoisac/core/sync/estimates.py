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

from dataclasses import dataclass, replace

import numpy as np

from mimoisac.core.errors import DimensionError


def _as_array(values) -> np.ndarray:
    array = np.array(values, dtype=float).reshape(-1)
    array.setflags(write=False)
    return array


def _finite_or_none(value: float, scale: float = 1.0) -> float | None:
    return float(value * scale) if np.isfinite(value) else None


@dataclass(frozen=True)
class SyncEstimates:
    """Per-channel and fused synchronization estimates.

    Attributes:
        sto: Per-channel frame start in seconds.
        cfo: Per-channel CFO in Hz.
        sfo: Per-channel normalized SFO.
        residual_sto: Per-channel delay in seconds relative to the fused start,
            NaN where fine tuning was skipped.
        residual_cfo: Per-channel residual CFO in Hz, NaN where fine tuning
            was skipped.
        coarse_residual_sto: Integer-sample start relative to the fused start,
            as fused; fine tuning leaves it untouched.
        sto_global: Earliest start over channels, once fused.
        cfo_global: Mean CFO, once fused.
        sfo_global: Mean SFO, once fused.
    """

    sto: np.ndarray
    cfo: np.ndarray
    sfo: np.ndarray
    residual_sto: np.ndarray | None = None
    residual_cfo: np.ndarray | None = None
    coarse_residual_sto: np.ndarray | None = None
    sto_global: float | None = None
    cfo_global: float | None = None
    sfo_global: float | None = None

    def __post_init__(self) -> None:
        for name in ("sto", "cfo", "sfo"):
            object.__setattr__(self, name, _as_array(getattr(self, name)))
        count = len(self.sto)
        if not len(self.cfo) == len(self.sfo) == count:
            raise DimensionError("Per-channel estimates differ in length")
        for name in ("residual_sto", "residual_cfo", "coarse_residual_sto"):
            value = getattr(self, name)
            value = np.zeros(count) if value is None else value
            object.__setattr__(self, name, _as_array(value))
            if len(getattr(self, name)) != count:
                raise DimensionError(f"{name} has the wrong length")

    @property
    def num_channels(self) -> int:
        return len(self.sto)

    @property
    def is_fused(self) -> bool:
        return self.sto_global is not None

    def to_dict(self) -> dict:
        return {
            "channels": [
                {
                    "channel": index,
                    "cfo_hz": float(self.cfo[index]),
                    "sfo_ppm": float(self.sfo[index] * 1e6),
                    "sto_ns": float(self.sto[index] * 1e9),
                    "coarse_residual_sto_ns": float(self.coarse_residual_sto[index] * 1e9),
                    "residual_sto_ns": _finite_or_none(self.residual_sto[index], 1e9),
                    "residual_cfo_hz": _finite_or_none(self.residual_cfo[index]),
                }
                for index in range(self.num_channels)
            ],
            "global": {
                "cfo_hz": self.cfo_global,
                "sfo_ppm": None if self.sfo_global is None else self.sfo_global * 1e6,
                "sto_ns": None if self.sto_global is None else self.sto_global * 1e9,
            },
        }


def fuse_global(per_channel: SyncEstimates) -> SyncEstimates:
    """Mean CFO and SFO, earliest STO, residual STO relative to the earliest start."""
    if per_channel.num_channels == 0:
        raise DimensionError("Cannot fuse estimates of zero channels")
    sto_global = float(np.min(per_channel.sto))
    residual = per_channel.sto - sto_global
    return replace(
        per_channel,
        residual_sto=residual,
        coarse_residual_sto=residual,
        sto_global=sto_global,
        cfo_global=float(np.mean(per_channel.cfo)),
        sfo_global=float(np.mean(per_channel.sfo)),
    )
