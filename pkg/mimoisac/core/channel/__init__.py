from .hardware import (
    HardwareProfile,
    HardwareResponse,
    make_abe_bank,
    make_afe_bank,
    sample_rayleigh_channel_delays,
)
from .paths import ModelError, PathSet, PropagationPath
from .propagation import (
    ChannelRealization,
    GroundTruth,
    ImpairmentSpec,
    NoiseMode,
    NoiseSpec,
    propagate,
)
from .resampler import FractionalResampler, delay_signal
