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

from dataclasses import asdict, dataclass, field
import json
import logging
import platform

import numpy as np
import scipy

from mimoisac.constants import APP_VERSION


logger = logging.getLogger(__name__)

# Stable column order of every per-trial export.
METRIC_NAMES = (
    "evm_db",
    "evm_spread_db",
    "ber",
    "uncoded_ber",
    "pplr_db",
    "range_pslr_db",
    "range_islr_db",
    "azimuth_pslr_db",
    "azimuth_islr_db",
    "sir_db",
    "sigma_theta_deg",
    "sigma_theta_wrapped_deg",
)

STATUS_OK = "ok"
STATUS_FAILED = "failed"


def environment_fingerprint() -> dict:
    return {
        "mimoisac": APP_VERSION,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one (point, trial) work unit.

    Attributes:
        config_hash: SHA-256 of the canonical scenario.
        seed: Master seed of the run.
        point_index: Index into the sweep grid.
        trial_index: Trial number at that point.
        sigma_tau: Delay mismatch standard deviation in seconds.
        sigma_tau_samples: The same in sampling periods.
        metrics: Values keyed by :data:`METRIC_NAMES`; None when not computed.
        status: ``ok`` or ``failed``.
        error: Exception text of a failed trial.
        fingerprint: Library versions the record was produced with.
    """

    config_hash: str
    seed: int
    point_index: int
    trial_index: int
    sigma_tau: float
    sigma_tau_samples: float
    metrics: dict = field(default_factory=dict)
    status: str = STATUS_OK
    error: str | None = None
    fingerprint: dict = field(default_factory=environment_fingerprint)

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        return cls(**data)


@dataclass(frozen=True)
class PointSummary:
    """Mean and standard deviation of each metric at one sweep point."""

    point_index: int
    sigma_tau: float
    sigma_tau_samples: float
    trials: int
    failures: int
    mean: dict
    std: dict


def summarize(records: list[RunRecord]) -> list[PointSummary]:
    """Ordered reduction of trial records into per-point statistics."""
    points: dict[int, list[RunRecord]] = {}
    for record in sorted(records, key=lambda r: (r.point_index, r.trial_index)):
        points.setdefault(record.point_index, []).append(record)

    summaries = []
    for index, group in points.items():
        ok = [record for record in group if record.ok]
        mean, std = {}, {}
        for name in METRIC_NAMES:
            values = [r.metrics[name] for r in ok if r.metrics.get(name) is not None]
            mean[name] = float(np.mean(values)) if values else None
            std[name] = float(np.std(values)) if values else None
        summaries.append(
            PointSummary(
                point_index=index,
                sigma_tau=group[0].sigma_tau,
                sigma_tau_samples=group[0].sigma_tau_samples,
                trials=len(group),
                failures=len(group) - len(ok),
                mean=mean,
                std=std,
            )
        )
    return summaries


def failure_rate(records: list[RunRecord]) -> float:
    if not records:
        return 0.0
    return sum(not record.ok for record in records) / len(records)


def records_to_json(records: list[RunRecord]) -> str:
    return json.dumps([record.to_dict() for record in records], sort_keys=True, indent=2)


def records_from_json(text: str) -> list[RunRecord]:
    return [RunRecord.from_dict(item) for item in json.loads(text)]


RECORD_FIELDNAMES = [
    "point_index",
    "trial_index",
    "sigma_tau_s",
    "sigma_tau_samples",
    "status",
    *METRIC_NAMES,
    "error",
]

SUMMARY_FIELDNAMES = [
    "point_index",
    "sigma_tau_s",
    "sigma_tau_samples",
    "trials",
    "failures",
    *[f"{name}_{stat}" for name in METRIC_NAMES for stat in ("mean", "std")],
]


def record_rows(records: list[RunRecord]) -> list[dict]:
    """Flat per-trial rows keyed by :data:`RECORD_FIELDNAMES`."""
    return [
        {
            "point_index": r.point_index,
            "trial_index": r.trial_index,
            "sigma_tau_s": r.sigma_tau,
            "sigma_tau_samples": r.sigma_tau_samples,
            "status": r.status,
            **{name: r.metrics.get(name) for name in METRIC_NAMES},
            "error": r.error,
        }
        for r in records
    ]


def summary_rows(summaries: list[PointSummary]) -> list[dict]:
    """Flat per-point rows keyed by :data:`SUMMARY_FIELDNAMES`."""
    rows = []
    for s in summaries:
        row = {
            "point_index": s.point_index,
            "sigma_tau_s": s.sigma_tau,
            "sigma_tau_samples": s.sigma_tau_samples,
            "trials": s.trials,
            "failures": s.failures,
        }
        for name in METRIC_NAMES:
            row[f"{name}_mean"] = s.mean.get(name)
            row[f"{name}_std"] = s.std.get(name)
        rows.append(row)
    return rows
