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

from dataclasses import asdict, dataclass, field, fields, is_dataclass, replace
from enum import Enum
from fractions import Fraction
import hashlib
import json
import logging
from pathlib import Path
import types
import typing

import numpy as np
import yaml

from mimoisac.core.array import UlaGeometry
from mimoisac.core.channel import HardwareProfile, NoiseMode, NoiseSpec, PathSet, PropagationPath
from mimoisac.constants import SPEED_OF_LIGHT
from mimoisac.core.errors import ConfigurationError
from mimoisac.core.radar import WindowKind
from mimoisac.core.sync import SyncOptions
from mimoisac.core.waveform import CodeKind, CodeSpec, OfdmConfig


logger = logging.getLogger(__name__)


class Profile(str, Enum):
    DESK = "desk"
    FULL = "full"


# num_subcarriers, num_symbols, cp_length, subcarrier_spacing, trials per point
PROFILE_DEFAULTS = {
    Profile.DESK: (256, 64, 64, 1.92e6, 100),
    Profile.FULL: (2048, 512, 512, 240e3, 100),
}


@dataclass(frozen=True)
class CodeSettings:
    kind: str = "ldpc"
    rate: str = "2/3"
    block_length: int = 648
    max_iterations: int = 50
    construction_seed: int = 0


@dataclass(frozen=True)
class OfdmSettings:
    """Frame parameters; unset sizes come from the profile."""

    num_subcarriers: int | None = None
    num_symbols: int | None = None
    cp_length: int | None = None
    subcarrier_spacing: float | None = None
    carrier_frequency: float = 27.5e9
    pilot_subcarrier_spacing: int = 2
    pilot_symbol_spacing: int = 2
    code: CodeSettings = field(default_factory=CodeSettings)


@dataclass(frozen=True)
class ArraySettings:
    num_tx: int = 4
    num_rx: int = 8
    tx_beams_deg: tuple[float, ...] = (0.0,)
    azimuth_oversampling: int = 4


@dataclass(frozen=True)
class PathSettings:
    """One propagation path; the LoS path uses tx_range_m only."""

    tx_range_m: float = 1.0
    rx_range_m: float = 0.0
    amplitude: float = 1.0
    phase_deg: float = 0.0
    doppler_hz: float = 0.0
    dod_deg: float = 0.0
    doa_deg: float = 0.0
    los: bool = False


@dataclass(frozen=True)
class NoiseSettings:
    mode: str = "snr"
    snr_db: float = 30.0
    noise_figure_db: float = 10.0
    temperature: float = 290.0


@dataclass(frozen=True)
class ImpairmentSettings:
    sto_ns: float = 0.0
    cfo_hz: float = 0.0
    sfo_ppm: float = 0.0
    common_phase_rad: float | None = None
    intermediate_frequency_hz: float = 0.0
    abe_profile: str = "ideal"
    afe_profile: str = "ideal"
    predistortion: bool = False
    noise: NoiseSettings = field(default_factory=NoiseSettings)


@dataclass(frozen=True)
class SyncSettings:
    fine_tune: bool = True
    compensate_if_phase: bool = False
    gate_cir: bool = False
    min_pilot_snr_db: float = 10.0
    backoff: int | None = None


@dataclass(frozen=True)
class SweepSettings:
    """Grid of sigma_tau in units of the sampling period.

    Log-spaced between the two exponents unless ``values`` lists the points.
    """

    variable: str = "sigma_tau"
    log10_min: float = -6.0
    log10_max: float = 3.0
    num_points: int = 37
    values: tuple[float, ...] | None = None
    trials: int | None = None
    max_failure_rate: float = 0.1
    workers: int | None = None

    def grid(self) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        return np.logspace(self.log10_min, self.log10_max, self.num_points)


@dataclass(frozen=True)
class WindowSettings:
    range: str = "chebyshev"
    doppler: str = "chebyshev"
    azimuth: str = "chebyshev"
    sidelobe_db: float = 100.0
    range_oversampling: int = 1
    # Window of the cut that lobe metrics and PPLR are read from; None reuses the image windows.
    lobe_window: str | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete description of one experiment."""

    name: str = "scenario"
    seed: int = 0
    profile: str = "desk"
    genie_decoding: bool = False
    ofdm: OfdmSettings = field(default_factory=OfdmSettings)
    arrays: ArraySettings = field(default_factory=ArraySettings)
    paths: tuple[PathSettings, ...] = (PathSettings(tx_range_m=1.0, los=True),)
    impairments: ImpairmentSettings = field(default_factory=ImpairmentSettings)
    sync: SyncSettings = field(default_factory=SyncSettings)
    sweep: SweepSettings = field(default_factory=SweepSettings)
    windows: WindowSettings = field(default_factory=WindowSettings)

    def __post_init__(self) -> None:
        _validate(self)

    @property
    def trials(self) -> int:
        if self.sweep.trials is not None:
            return self.sweep.trials
        return PROFILE_DEFAULTS[Profile(self.profile)][4]

    def ofdm_config(self) -> OfdmConfig:
        n, m, cp, spacing, _ = PROFILE_DEFAULTS[Profile(self.profile)]
        settings = self.ofdm
        code = settings.code
        return OfdmConfig(
            num_subcarriers=settings.num_subcarriers or n,
            num_symbols=settings.num_symbols or m,
            cp_length=cp if settings.cp_length is None else settings.cp_length,
            subcarrier_spacing=settings.subcarrier_spacing or spacing,
            carrier_frequency=settings.carrier_frequency,
            pilot_subcarrier_spacing=settings.pilot_subcarrier_spacing,
            pilot_symbol_spacing=settings.pilot_symbol_spacing,
            code=CodeSpec(
                kind=CodeKind(code.kind),
                rate=Fraction(code.rate),
                block_length=code.block_length,
                max_iterations=code.max_iterations,
                construction_seed=code.construction_seed,
            ),
        )

    def tx_geometry(self) -> UlaGeometry:
        return UlaGeometry(self.arrays.num_tx, self.ofdm.carrier_frequency)

    def rx_geometry(self) -> UlaGeometry:
        return UlaGeometry(self.arrays.num_rx, self.ofdm.carrier_frequency)

    def path_set(self) -> PathSet:
        paths = []
        for item in self.paths:
            attenuation = item.amplitude * np.exp(1j * np.radians(item.phase_deg))
            paths.append(
                PropagationPath(
                    attenuation=complex(attenuation),
                    tx_delay=item.tx_range_m / SPEED_OF_LIGHT,
                    rx_delay=0.0 if item.los else item.rx_range_m / SPEED_OF_LIGHT,
                    doppler=item.doppler_hz,
                    dod=float(np.radians(item.dod_deg)),
                    doa=float(np.radians(item.doa_deg)),
                    is_los=item.los,
                )
            )
        return PathSet(tuple(paths))

    def noise_spec(self) -> NoiseSpec:
        noise = self.impairments.noise
        return NoiseSpec(
            mode=NoiseMode(noise.mode),
            noise_figure_db=noise.noise_figure_db,
            temperature=noise.temperature,
            snr_db=noise.snr_db,
        )

    def sync_options(self) -> SyncOptions:
        return SyncOptions(
            fine_tune=self.sync.fine_tune,
            compensate_if_phase=self.sync.compensate_if_phase,
            intermediate_frequency=self.impairments.intermediate_frequency_hz,
            min_pilot_snr_db=self.sync.min_pilot_snr_db,
            gate_cir=self.sync.gate_cir,
            backoff=self.sync.backoff,
        )

    def to_dict(self) -> dict:
        return asdict(self)

    def canonical_json(self) -> str:
        """Sorted, compact JSON of the validated configuration."""
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


def _validate(config: ScenarioConfig) -> None:
    try:
        Profile(config.profile)
        CodeKind(config.ofdm.code.kind)
        NoiseMode(config.impairments.noise.mode)
        HardwareProfile(config.impairments.abe_profile)
        HardwareProfile(config.impairments.afe_profile)
        windows = config.windows
        for kind in (windows.range, windows.doppler, windows.azimuth, windows.lobe_window):
            if kind is not None:
                WindowKind(kind)
        Fraction(config.ofdm.code.rate)
    except ValueError as e:
        raise ConfigurationError(str(e)) from e
    if config.sweep.variable != "sigma_tau":
        raise ConfigurationError(f"Unsupported sweep variable {config.sweep.variable!r}")
    if config.sweep.values is not None and (
        not config.sweep.values or min(config.sweep.values) < 0
    ):
        raise ConfigurationError("sweep.values must be a non-empty list of non-negative numbers")
    if config.sweep.num_points < 1 or (config.sweep.trials is not None and config.sweep.trials < 1):
        raise ConfigurationError("Sweeps need at least one point and one trial")
    if not 0 <= config.sweep.max_failure_rate <= 1:
        raise ConfigurationError("sweep.max_failure_rate must lie in [0, 1]")
    if config.arrays.num_tx < 1 or config.arrays.num_rx < 1 or config.arrays.azimuth_oversampling < 1:
        raise ConfigurationError("Array sizes and azimuth oversampling must be positive")
    if not config.arrays.tx_beams_deg:
        raise ConfigurationError("arrays.tx_beams_deg needs at least one beam")
    if sum(path.los for path in config.paths) != 1:
        raise ConfigurationError("paths must contain exactly one LoS path")
    if config.seed < 0:
        raise ConfigurationError("seed must be non-negative")


def _coerce(value, hint, key: str):
    origin = typing.get_origin(hint)
    args = typing.get_args(hint)
    if is_dataclass(hint):
        return _build(hint, value, key)
    if origin in (typing.Union, types.UnionType):
        if value is None:
            return None
        inner = next(arg for arg in args if arg is not type(None))
        return _coerce(value, inner, key)
    if origin is tuple:
        if not isinstance(value, (list, tuple)):
            raise ConfigurationError(f"{key} must be a list")
        return tuple(_coerce(item, args[0], f"{key}[{i}]") for i, item in enumerate(value))
    is_number = isinstance(value, (int, float)) and not isinstance(value, bool)
    if hint is float:
        if not is_number:
            raise ConfigurationError(f"{key} must be a number, got {value!r}")
        return float(value)
    if hint is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise ConfigurationError(f"{key} must be an integer, got {value!r}")
    if hint is bool and not isinstance(value, bool):
        raise ConfigurationError(f"{key} must be true or false, got {value!r}")
    if hint is str:
        if is_number:
            return str(value)
        if not isinstance(value, str):
            raise ConfigurationError(f"{key} must be a string, got {value!r}")
    return value


def _build(cls, data, prefix: str = ""):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigurationError(f"{prefix or 'configuration'} must be a mapping")
    hints = typing.get_type_hints(cls)
    known = {item.name for item in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        path = ".".join(filter(None, [prefix, unknown[0]]))
        raise ConfigurationError(f"Unknown configuration key {path!r}")
    values = {
        name: _coerce(value, hints[name], ".".join(filter(None, [prefix, name])))
        for name, value in data.items()
    }
    return cls(**values)


def scenario_from_dict(data: dict | None) -> ScenarioConfig:
    """Validate a parsed configuration tree.

    Raises:
        ConfigurationError: On unknown keys, wrong types or invalid values.
    """
    try:
        return _build(ScenarioConfig, data)
    except TypeError as e:
        raise ConfigurationError(str(e)) from e


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Read a YAML (or JSON) scenario file."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigurationError(f"Cannot read scenario {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Invalid YAML in {path}: {e}") from e
    config = scenario_from_dict(data)
    logger.info("Loaded scenario %s from %s (hash %s)", config.name, path, config.config_hash[:12])
    return config


def apply_overrides(
    config: ScenarioConfig,
    *,
    seed: int | None = None,
    profile: str | None = None,
    trials: int | None = None,
    genie: bool | None = None,
) -> ScenarioConfig:
    """Return a copy with command-line overrides applied."""
    changes = {}
    if seed is not None:
        changes["seed"] = seed
    if profile is not None:
        changes["profile"] = profile
    if genie:
        changes["genie_decoding"] = True
    if trials is not None:
        changes["sweep"] = replace(config.sweep, trials=trials)
    return replace(config, **changes) if changes else config
