from .geometry import (
    GeometryError,
    SteeringVector,
    UlaGeometry,
    azimuth_grid,
    path_length_difference,
    receive_element_phases,
    receive_steering_vector,
    steering_matrix,
    transmit_element_phases,
    transmit_steering_vector,
)
