"""Pseudo-spectral solver and verification harness for the 1D focusing-free
nonlinear Schrodinger equation in exponentially weighted Sobolev spaces.

The package constructs solutions of ``i u_t + u_xx = |u|^(p-1) u`` (odd
``p >= 3``) on a periodic interval, tracks the radius of the strip of
analyticity through the decay rate of Fourier coefficients, and
re-measures every inequality the global continuation argument rests on:
the exponential cancellation bound, the product-norm algebra bound,
embeddings, the interpolation inequality, the weight-commutator defect
bounds, and the almost-conservation of the weighted energy.
"""

from .errors import (
    BlowupSuspected,
    ConfigError,
    GevreyNlsError,
    InsufficientModes,
    MaxIters,
    NoContraction,
    NoiseGuardViolation,
    StepTooLarge,
)
from .spectral import (
    GridSpec,
    SpatialField,
    SpectralField,
    free_evolution,
    nonlinearity,
    pad_modes,
    to_spatial,
    to_spectral,
    truncate_modes,
)
from .gevrey import (
    NOISE_GUARD_TOL,
    GevreyParams,
    algebra_defect,
    apply_lambda,
    embedding_constant,
    ensure_noise_guard,
    gevrey_norm,
    noise_guard_limit,
)
from .multilinear import (
    CancellationSplit,
    FrequencyTuple,
    cancellation_induction_split,
    cancellation_margin,
)
from .solver import (
    InitialDataSpec,
    SolverConfig,
    Trajectory,
    continue_solution,
    contraction_delta,
    duhamel_apply,
    make_initial_data,
    picard_solve,
    splitstep_solve,
)
from .diagnostics import (
    SATURATED,
    BootstrapParams,
    BootstrapVerdict,
    DerivativeCheck,
    EnergyRecord,
    bootstrap_monitor,
    bootstrap_sigma,
    check_growth_envelope,
    compute_S,
    compute_defect,
    dS_dt_identity_check,
    defect_bound_ratio,
    estimate_radius,
    gn_alpha,
    gn_ratio,
    segment_records,
    self_consistent_budget,
    sigma_final,
    s_value,
)
from .verification import SUITE_NAMES, SuiteResult, run_suite
from .reporting import (
    ENERGY_COLUMNS,
    read_energy_csv,
    read_trajectory_npz,
    write_energy_csv,
    write_summary_json,
    write_trajectory_npz,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "GevreyNlsError",
    "NoiseGuardViolation",
    "NoContraction",
    "MaxIters",
    "StepTooLarge",
    "BlowupSuspected",
    "InsufficientModes",
    "ConfigError",
    # spectral
    "GridSpec",
    "SpatialField",
    "SpectralField",
    "to_spectral",
    "to_spatial",
    "pad_modes",
    "truncate_modes",
    "nonlinearity",
    "free_evolution",
    # gevrey
    "NOISE_GUARD_TOL",
    "GevreyParams",
    "noise_guard_limit",
    "ensure_noise_guard",
    "gevrey_norm",
    "apply_lambda",
    "embedding_constant",
    "algebra_defect",
    # multilinear
    "FrequencyTuple",
    "CancellationSplit",
    "cancellation_margin",
    "cancellation_induction_split",
    # solver
    "SolverConfig",
    "Trajectory",
    "InitialDataSpec",
    "make_initial_data",
    "contraction_delta",
    "duhamel_apply",
    "picard_solve",
    "splitstep_solve",
    "continue_solution",
    # diagnostics
    "SATURATED",
    "EnergyRecord",
    "BootstrapParams",
    "BootstrapVerdict",
    "DerivativeCheck",
    "s_value",
    "compute_S",
    "segment_records",
    "compute_defect",
    "defect_bound_ratio",
    "dS_dt_identity_check",
    "estimate_radius",
    "bootstrap_sigma",
    "sigma_final",
    "self_consistent_budget",
    "bootstrap_monitor",
    "gn_alpha",
    "gn_ratio",
    "check_growth_envelope",
    # verification
    "SuiteResult",
    "SUITE_NAMES",
    "run_suite",
    # reporting
    "ENERGY_COLUMNS",
    "write_energy_csv",
    "read_energy_csv",
    "write_trajectory_npz",
    "read_trajectory_npz",
    "write_summary_json",
]
