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

from scipy import constants as _sc

# ============================================================================
# Application Info
# ============================================================================

APP_NAME = "MimoIsac"
APP_VERSION = "1.0.0"
APP_DESCRIPTION = (
    "Bistatic MIMO-OFDM integrated sensing and communication simulator"
)

LICENSE_TYPE = "GNU General Public License v3.0"
LICENSE_SPDX = "GPL-3.0-or-later"

# ============================================================================
# Physical Constants
# ============================================================================

# Exact by SI definition.
SPEED_OF_LIGHT = float(_sc.c)
BOLTZMANN = float(_sc.k)

STANDARD_TEMPERATURE_K = 290.0

# ============================================================================
# Numerical Floors
# ============================================================================

# Reported instead of -inf for perfect (error-free) ratios.
DB_FLOOR = -150.0
DB_CEILING = 150.0

# ============================================================================
# CLI Exit Codes
# ============================================================================

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_RUNTIME_FAILURE = 3
