from .processing import (
    RadarCfr,
    RadarCube,
    RangeAzimuthCut,
    build_radar_cfr,
    default_windows,
    doa_cube,
    doppler_axis,
    range_axis,
    range_doppler_image,
    zero_doppler_cut,
)
from .windows import Window, WindowKind, mainlobe_half_width, make_window
