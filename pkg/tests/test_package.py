"""The top-level package re-exports the public API."""

import gevrey_nls


def test_version():
    assert gevrey_nls.__version__ == "0.1.0"


def test_public_names_importable():
    expected = [
        # spectral
        "GridSpec", "SpatialField", "SpectralField", "to_spectral", "to_spatial",
        "pad_modes", "truncate_modes", "nonlinearity", "free_evolution",
        # gevrey
        "GevreyParams", "gevrey_norm", "apply_lambda", "embedding_constant",
        "algebra_defect", "noise_guard_limit",
        # multilinear
        "FrequencyTuple", "cancellation_margin", "cancellation_induction_split",
        # solver
        "SolverConfig", "Trajectory", "InitialDataSpec", "make_initial_data",
        "contraction_delta", "picard_solve", "splitstep_solve", "continue_solution",
        # diagnostics
        "EnergyRecord", "BootstrapParams", "compute_S", "compute_defect",
        "estimate_radius", "bootstrap_sigma", "bootstrap_monitor",
        "check_growth_envelope", "gn_ratio",
        # verification / reporting / errors
        "run_suite", "SUITE_NAMES", "read_energy_csv", "write_energy_csv",
        "GevreyNlsError", "ConfigError", "NoiseGuardViolation",
    ]
    for name in expected:
        assert hasattr(gevrey_nls, name), name
        assert name in gevrey_nls.__all__, name


def test_all_names_resolve():
    for name in gevrey_nls.__all__:
        assert getattr(gevrey_nls, name) is not None
