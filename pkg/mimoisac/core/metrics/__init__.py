from .budget import LinkBudget, image_snr
from .isac import IsacParams, derive_isac_params
from .quality import (
    EvmResult,
    MetricError,
    NoPeakError,
    PhaseMapping,
    SidelobeMetrics,
    bit_error_rate,
    delay_to_phase_std,
    evm,
    mean_image_sir,
    peak_sidelobe_metrics,
    power_db,
    pplr,
)
