from .config import CodeKind, CodeSpec, Modulation, OfdmConfig, desk_profile, full_profile
from .coding import DecodeResult, LdpcCode, Uncoded, make_channel_code
from .frame import (
    CapacityError,
    FrameBuilder,
    FrameGrid,
    build_frame,
    qpsk_llr,
    qpsk_map,
    random_qpsk,
)
from .transmitter import (
    CalibrationError,
    add_cyclic_prefix,
    apply_tx_beamforming,
    apply_tx_predistortion,
    build_preamble,
    from_time_domain,
    preamble_body,
    preamble_spectrum,
    to_time_domain,
)
