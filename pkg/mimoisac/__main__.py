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

import sys
import logging

from mimoisac.cli import build_parser, run
from mimoisac.core.logging_config import setup_logging


def main(argv: list[str] | None = None) -> int:
    """Application main entry point."""

    # Parse command line arguments
    args = build_parser().parse_args(argv)

    # Setup logging
    setup_logging(verbose=args.verbose)
    logger = logging.getLogger(__name__)
    logger.info("%s Starting MimoIsac %s %s", "=" * 20, args.verb, "=" * 20)

    exit_code = run(args)

    logger.info("%s Finished with exit code %d %s", "=" * 20, exit_code, "=" * 20)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
