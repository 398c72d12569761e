"""Exception types raised by the solver and diagnostics layers."""


class GevreyNlsError(Exception):
    """Base class for all package-specific failures."""


class NoiseGuardViolation(GevreyNlsError):
    """sigma * xi_max is large enough that amplified round-off would
    exceed the configured tolerance; the requested weight is refused."""


class NoContraction(GevreyNlsError):
    """Picard iteration failed to contract (step too large, or the
    noise guard is being stressed)."""


class MaxIters(GevreyNlsError):
    """Picard iteration hit the iteration cap before reaching tolerance."""


class StepTooLarge(GevreyNlsError):
    """Reference integrator step does not resolve the fastest linear phase."""


class BlowupSuspected(GevreyNlsError):
    """Continuation norm exceeded the configured ceiling."""


class InsufficientModes(GevreyNlsError):
    """Radius estimation has fewer than the minimum number of usable modes."""


class ConfigError(GevreyNlsError):
    """Run configuration failed schema or semantic validation."""
