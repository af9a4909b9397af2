from .correction import (
    FineTuneResult,
    FramingError,
    correct_and_frame,
    estimate_residuals,
    fine_tune_residuals,
    window_backoff,
)
from .estimates import SyncEstimates, fuse_global
from .estimators import (
    InsufficientPilotsError,
    PreambleNotFoundError,
    SyncFailureError,
    coarse_cfo_per_channel,
    pilot_estimates,
    pilot_values,
    sfo_per_channel,
    sto_per_channel,
    sto_sample_index,
    timing_metric,
)
from .pipeline import SyncOptions, SyncResult, estimate_per_channel, synchronize
