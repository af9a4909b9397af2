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

import argparse
from dataclasses import replace
import logging
from pathlib import Path

from mimoisac.constants import (
    APP_DESCRIPTION,
    APP_NAME,
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_RUNTIME_FAILURE,
)
from mimoisac.core.errors import ConfigurationError, MimoIsacError
from mimoisac.core.exporters import ExportError, JsonExporter
from mimoisac.core.metrics import derive_isac_params
from mimoisac.core.paths import Paths
from mimoisac.core.runner import (
    ExportFormat,
    ScenarioConfig,
    apply_overrides,
    export,
    load_scenario,
    records_from_json,
    run_link,
    run_scenario_replay,
    run_sweep,
    trial_streams,
    write_manifest,
)


logger = logging.getLogger(__name__)

DEFAULT_SCENARIOS = {
    "sweep": "sigma_tau_sweep.yaml",
    "replay": "replay.yaml",
    "params": "table1.yaml",
    "export": "replay.yaml",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mimoisac", description=f"{APP_NAME} - {APP_DESCRIPTION}")
    parser.add_argument("--verbose", action="store_true", help="Log progress to the console")
    verbs = parser.add_subparsers(dest="verb", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Scenario file (YAML or JSON)")
    common.add_argument("--seed", type=int, help="Master seed override")
    common.add_argument("--profile", choices=["desk", "full"], help="Frame size profile")
    common.add_argument("--out", type=Path, help="Output directory")

    sweep = verbs.add_parser("sweep", parents=[common], help="Monte-Carlo sigma_tau sweep")
    sweep.add_argument("--trials", type=int, help="Trials per grid point")
    sweep.add_argument("--genie", action="store_true", help="Radar processing with the true frame")
    sweep.add_argument("--workers", type=int, help="Worker processes")

    replay = verbs.add_parser("replay", parents=[common], help="Single end-to-end scenario run")
    replay.add_argument("--genie", action="store_true", help="Radar processing with the true frame")

    verbs.add_parser("params", parents=[common], help="Derived ISAC performance parameters")

    exporter = verbs.add_parser("export", parents=[common], help="Re-export records or dump IQ")
    exporter.add_argument(
        "--format", choices=[f.value for f in ExportFormat], default="csv", dest="fmt"
    )
    exporter.add_argument("--records", type=Path, help="records.json written by sweep")
    return parser


def _scenario(args: argparse.Namespace) -> ScenarioConfig:
    path = args.config or Paths.scenario(DEFAULT_SCENARIOS[args.verb])
    config = load_scenario(path)
    config = apply_overrides(
        config,
        seed=args.seed,
        profile=args.profile,
        trials=getattr(args, "trials", None),
        genie=getattr(args, "genie", None),
    )
    workers = getattr(args, "workers", None)
    if workers is not None:
        config = replace(config, sweep=replace(config.sweep, workers=workers))
    return config


def cmd_sweep(args: argparse.Namespace) -> int:
    scenario = _scenario(args)
    out_dir = Paths.output_dir(args.out)
    result = run_sweep(scenario, progress=True)
    files = export(result.records, ExportFormat.CSV, out_dir, scenario.config_hash)
    files += export(result.records, ExportFormat.JSON, out_dir, scenario.config_hash)
    files.append(JsonExporter(out_dir / "scenario.json").write_text(scenario.canonical_json()))
    write_manifest(out_dir, scenario.config_hash, "sweep", files)
    if result.failure_rate > scenario.sweep.max_failure_rate:
        logger.error(
            "Failure rate %.1f %% exceeds %.1f %%",
            100 * result.failure_rate,
            100 * scenario.sweep.max_failure_rate,
        )
        return EXIT_RUNTIME_FAILURE
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    scenario = _scenario(args)
    out_dir = Paths.output_dir(args.out)
    result = run_scenario_replay(scenario, out_dir)
    write_manifest(out_dir, scenario.config_hash, "replay", result.files)
    for row in result.sync_report["channels"]:
        residual = row["residual_sto_ns"]
        residual = "skipped" if residual is None else f"{residual:.3f} ns"
        print(
            f"ch {row['channel']}: CFO {row['cfo_hz']:.1f} Hz, SFO {row['sfo_ppm']:.3f} ppm, "
            f"residual STO {residual}"
        )
    return EXIT_OK


def cmd_params(args: argparse.Namespace) -> int:
    scenario = _scenario(args)
    params = derive_isac_params(scenario.ofdm_config(), scenario.arrays.num_rx)
    width = max(len(name) for name, _ in params.table_rows())
    for name, value in params.table_rows():
        print(f"{name:<{width}}  {value}")
    if args.out is not None:
        JsonExporter(Paths.output_dir(args.out) / "isac_params.json").export(params.to_dict())
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    scenario = _scenario(args)
    out_dir = Paths.output_dir(args.out)
    if args.fmt == ExportFormat.IQBIN.value:
        outcome = run_link(scenario, trial_streams(scenario.seed, 0, 0))
        files = export(
            [],
            ExportFormat.IQBIN,
            out_dir,
            scenario.config_hash,
            samples=outcome.realization.samples,
            sampling_period=scenario.ofdm_config().sampling_period,
            stem="received",
        )
    else:
        if args.records is None:
            raise ConfigurationError("--records is required for csv and json exports")
        try:
            records = records_from_json(args.records.read_text(encoding="utf-8"))
        except (OSError, ValueError, TypeError) as e:
            raise ConfigurationError(f"Cannot read records {args.records}: {e}") from e
        config_hash = records[0].config_hash if records else scenario.config_hash
        files = export(records, args.fmt, out_dir, config_hash)
    write_manifest(out_dir, scenario.config_hash, f"export {args.fmt}", files)
    return EXIT_OK


COMMANDS = {
    "sweep": cmd_sweep,
    "replay": cmd_replay,
    "params": cmd_params,
    "export": cmd_export,
}


def run(args: argparse.Namespace) -> int:
    """Dispatch a parsed command line and map errors to exit codes."""
    try:
        return COMMANDS[args.verb](args)
    except ConfigurationError as e:
        logger.error("Configuration error: %s", e)
        return EXIT_CONFIG_ERROR
    except ExportError as e:
        logger.error("Export failed for %s: %s", e.path, e)
        return EXIT_RUNTIME_FAILURE
    except MimoIsacError as e:
        logger.error("Run failed: %s", e)
        return EXIT_RUNTIME_FAILURE
