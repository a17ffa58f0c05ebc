"""Scattering-model toolkit comparing reflective and redirective intelligent surfaces."""

__version__ = "0.1.0"

from .array_model import (  # noqa: E402
    ArrayGeometry,
    CoupledArray,
    coupling_matrix,
    dft_matrix,
    effective_area,
    embedded_pattern,
    scattering_matrix,
    steering_vector,
)
from .grid import AngularGrid  # noqa: E402
from .scattering import (  # noqa: E402
    ActiveLoad,
    Model,
    PhasedLoad,
    PlaneWaveSet,
    SwitchedDFTLoad,
    ZeroLoad,
    exact_transfer,
    realize_load,
    scatter,
)

__all__ = [
    "ActiveLoad", "AngularGrid", "ArrayGeometry", "CoupledArray", "Model", "PhasedLoad",
    "PlaneWaveSet", "SwitchedDFTLoad", "ZeroLoad", "coupling_matrix", "dft_matrix",
    "effective_area", "embedded_pattern", "exact_transfer", "realize_load", "scatter",
    "scattering_matrix", "steering_vector",
]
