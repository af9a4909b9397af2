from .chain import LinkOutcome, range_azimuth_cut, run_link, single_channel_zf, trial_streams
from .config import (
    Profile,
    ScenarioConfig,
    apply_overrides,
    load_scenario,
    scenario_from_dict,
)
from .export import ExportFormat, export, write_manifest
from .records import (
    METRIC_NAMES,
    PointSummary,
    RunRecord,
    failure_rate,
    records_from_json,
    records_to_json,
    summarize,
)
from .replay import ReplayResult, radar_cube, run_scenario_replay, sync_report
from .sweep import (
    ReferencePeak,
    SweepResult,
    cut_metrics,
    reference_peak,
    run_sweep,
    run_trial,
    sir_guard,
)
