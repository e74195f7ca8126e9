"""Separable continuous wavelet transform with per-axis dilations, plus
microlocal Sobolev energy functionals and a comparison-theorem harness."""

from ._accel import USING_NUMBA
from .config import RunConfig, load_config, parse_config, save_config, serialize_config
from .errors import ConfigurationError, DataError, InvariantFailure, PuwaveletError
from .grids import (
    ALL_QUADRANTS_2D,
    POSITIVE_QUADRANT_2D,
    FrequencyGrid,
    Neighborhood,
    SpatialGrid,
    make_frequency_grid,
    make_spatial_grid,
    quadrature_weight,
)
from .harness import TheoremReport, energy_map, selftest, theorem_check
from .microlocal import (
    Cone,
    MicrolocalQuery,
    ShellEnergySeries,
    cone_contains,
    cone_propagation_check,
    covered_shell_range,
    estimate_sobolev_order,
    local_decay_check,
    proof_bound_check,
    shell_energy_hormander,
    shell_energy_pu,
)
from .profiles import (
    WaveletSpec,
    WindowProfile1D,
    admissibility_constant,
    make_profile,
    make_wavelet,
)
from .signals import SignalSpec, generate, make_cutoff
from .transform import (
    CWTVolume,
    SampledField,
    analysis_energy,
    coverage_function,
    forward_transform,
    inverse_transform,
    iter_transform_slices,
    uncovered_energy_fraction,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_QUADRANTS_2D",
    "POSITIVE_QUADRANT_2D",
    "CWTVolume",
    "Cone",
    "ConfigurationError",
    "DataError",
    "FrequencyGrid",
    "InvariantFailure",
    "MicrolocalQuery",
    "Neighborhood",
    "PuwaveletError",
    "RunConfig",
    "SampledField",
    "ShellEnergySeries",
    "SignalSpec",
    "SpatialGrid",
    "TheoremReport",
    "USING_NUMBA",
    "WaveletSpec",
    "WindowProfile1D",
    "admissibility_constant",
    "analysis_energy",
    "cone_contains",
    "cone_propagation_check",
    "coverage_function",
    "covered_shell_range",
    "energy_map",
    "estimate_sobolev_order",
    "forward_transform",
    "generate",
    "inverse_transform",
    "iter_transform_slices",
    "load_config",
    "local_decay_check",
    "make_cutoff",
    "make_frequency_grid",
    "make_profile",
    "make_spatial_grid",
    "make_wavelet",
    "parse_config",
    "proof_bound_check",
    "quadrature_weight",
    "save_config",
    "selftest",
    "serialize_config",
    "shell_energy_hormander",
    "shell_energy_pu",
    "theorem_check",
    "uncovered_energy_fraction",
]
