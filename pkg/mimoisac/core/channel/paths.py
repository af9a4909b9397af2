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

from dataclasses import asdict, dataclass
from typing import Iterator, Sequence

from mimoisac.constants import SPEED_OF_LIGHT
from mimoisac.core.errors import ConfigurationError, MimoIsacError
from mimoisac.core.metrics.budget import LinkBudget


class ModelError(MimoIsacError):
    """The multipath set violates the channel model (e.g. no LoS path)."""


@dataclass(frozen=True)
class PropagationPath:
    """One propagation path between the arrays.

    Attributes:
        attenuation: Complex amplitude alpha_p.
        tx_delay: Transmitter-to-scatterer delay in seconds.
        rx_delay: Scatterer-to-receiver delay in seconds.
        doppler: Doppler shift in Hz.
        dod: Direction of departure in radians.
        doa: Direction of arrival in radians.
        is_los: Direct path flag.
    """

    attenuation: complex = 1.0
    tx_delay: float = 0.0
    rx_delay: float = 0.0
    doppler: float = 0.0
    dod: float = 0.0
    doa: float = 0.0
    is_los: bool = False

    def __post_init__(self) -> None:
        if self.tx_delay < 0 or self.rx_delay < 0:
            raise ConfigurationError("Path delays must be non-negative")

    @property
    def delay(self) -> float:
        return self.tx_delay + self.rx_delay

    def to_dict(self) -> dict:
        record = asdict(self)
        attenuation = complex(self.attenuation)
        record["attenuation"] = [attenuation.real, attenuation.imag]
        return record


@dataclass(frozen=True)
class PathSet:
    """Multipath set with exactly one LoS path."""

    paths: tuple[PropagationPath, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "paths", tuple(self.paths))

    def __iter__(self) -> Iterator[PropagationPath]:
        return iter(self.paths)

    def __len__(self) -> int:
        return len(self.paths)

    def validate(self) -> None:
        """Raise :class:`ModelError` unless the set has exactly one static LoS path."""
        los = [path for path in self.paths if path.is_los]
        if len(los) != 1:
            raise ModelError(f"Expected exactly one LoS path, found {len(los)}")
        if los[0].doppler != 0.0:
            raise ModelError("The LoS path cannot carry a Doppler shift")
        if los[0].rx_delay != 0.0:
            raise ModelError("The LoS delay belongs entirely to the transmit side")

    @property
    def los(self) -> PropagationPath:
        self.validate()
        return next(path for path in self.paths if path.is_los)

    @property
    def max_delay(self) -> float:
        return max((path.delay for path in self.paths), default=0.0)

    @classmethod
    def line_of_sight(
        cls, distance: float, attenuation: complex = 1.0, dod: float = 0.0, doa: float = 0.0
    ) -> "PathSet":
        return cls(
            (
                PropagationPath(
                    attenuation=attenuation,
                    tx_delay=distance / SPEED_OF_LIGHT,
                    dod=dod,
                    doa=doa,
                    is_los=True,
                ),
            )
        )

    @classmethod
    def from_link_budget(
        cls,
        budgets: Sequence[LinkBudget],
        dods: Sequence[float],
        doas: Sequence[float],
        dopplers: Sequence[float] | None = None,
        los_index: int = 0,
    ) -> "PathSet":
        """Derive path amplitudes and delays from per-path link budgets.

        The LoS path gets the free-space amplitude over ``tx_range``; the other
        paths get the bistatic radar-equation amplitude. Delays follow from the
        ranges, with the LoS delay counted entirely on the transmit side.
        """
        if not len(budgets) == len(dods) == len(doas):
            raise ConfigurationError("budgets, dods and doas must have equal lengths")
        dopplers = [0.0] * len(budgets) if dopplers is None else list(dopplers)
        paths = []
        for index, budget in enumerate(budgets):
            is_los = index == los_index
            if is_los:
                amplitude = budget.direct_amplitude()
                rx_delay = 0.0
            else:
                amplitude = budget.reflected_amplitude()
                rx_delay = budget.rx_range / SPEED_OF_LIGHT
            paths.append(
                PropagationPath(
                    attenuation=amplitude,
                    tx_delay=budget.tx_range / SPEED_OF_LIGHT,
                    rx_delay=rx_delay,
                    doppler=0.0 if is_los else dopplers[index],
                    dod=dods[index],
                    doa=doas[index],
                    is_los=is_los,
                )
            )
        return cls(tuple(paths))
