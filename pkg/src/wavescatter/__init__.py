"""Scattering-based solver for the 1D variable-coefficient wave equation.

Replaces the impedance coefficient by a step function jumping at grid
midpoints and propagates the exact solution of that surrogate: amplitudes
travel one cell per step and split at interfaces into transmitted and
reflected parts.  Handles regular and Dirac-comb initial data on the same
lattice.
"""

from .engine import (
    DIRAC,
    REGULAR,
    DiracSeparation,
    SolutionField,
    active_backend,
    rescaled_regular_waveform,
    run,
    run_dirac,
    separate_scales,
    step,
)
from .errors import (
    AlignmentError,
    DenseLimitError,
    MediumBoundsError,
    ParameterError,
    RefinementError,
    StructureError,
    WeightRangeError,
)
from .grids import SpatialGrid, TemporalGrid, build_grid
from .initial import (
    DiracCombData,
    InitialState,
    RegularData,
    convert_fg,
    extended_nodes,
    gaussian_mover,
    initialize,
)
from .medium import (
    Medium,
    MediumSamples,
    ReflectionWeights,
    compute_weights,
    constant_medium,
    evaluate_zeta_P,
    ramp_coefficient,
    ramp_medium,
    random_step_medium,
    sample_medium,
    step_medium,
)
from .oracle import dalembert_constant, trace_dirac_exact, trace_regular_exact
from .spectral import (
    SpectralBundle,
    build_bundle,
    build_step_matrix,
    factorization_residual,
    matrix_step_reference,
    spectral_radius,
    unitarity_residual,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentError",
    "DenseLimitError",
    "DIRAC",
    "DiracCombData",
    "DiracSeparation",
    "InitialState",
    "Medium",
    "MediumBoundsError",
    "MediumSamples",
    "ParameterError",
    "REGULAR",
    "ReflectionWeights",
    "RefinementError",
    "RegularData",
    "SolutionField",
    "SpatialGrid",
    "SpectralBundle",
    "StructureError",
    "TemporalGrid",
    "WeightRangeError",
    "active_backend",
    "build_bundle",
    "build_grid",
    "build_step_matrix",
    "compute_weights",
    "constant_medium",
    "convert_fg",
    "dalembert_constant",
    "evaluate_zeta_P",
    "extended_nodes",
    "factorization_residual",
    "gaussian_mover",
    "initialize",
    "matrix_step_reference",
    "ramp_coefficient",
    "ramp_medium",
    "random_step_medium",
    "rescaled_regular_waveform",
    "run",
    "run_dirac",
    "sample_medium",
    "separate_scales",
    "spectral_radius",
    "step",
    "step_medium",
    "trace_dirac_exact",
    "trace_regular_exact",
    "unitarity_residual",
]
