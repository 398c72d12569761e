"""Almost-conservation diagnostics for the exponentially weighted flow.

Writing ``U = apply_lambda(u, sigma)``, the monitored quantity is

    S = int |U|^2 + |grad U|^2 + (2/(p+1)) |U|^(p+1) dx,

exactly conserved at ``sigma = 0`` and almost conserved for small
``sigma``.  Its drift is driven by the nonlinear defect

    N(u) = |U|^(p-1) U - Lambda(|u|^(p-1) u),

the commutator between the weight and the nonlinearity, which vanishes
identically at ``sigma = 0`` and is bounded by ``sigma^theta`` times
powers of the weighted energy.  The functions here compute S and N,
check the time-derivative identity for S, estimate the analyticity
radius from spectral decay, and evaluate the sufficient-smallness budget
for ``sigma`` together with its closure diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InsufficientModes
from .gevrey import GevreyParams, apply_lambda, ensure_noise_guard
from .solver import Trajectory
from .spectral import (
    SpatialField,
    SpectralField,
    nonlinearity,
    pad_modes,
    to_spatial,
    to_spectral,
)

__all__ = [
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
]

# sentinel radius for spectra decaying faster than any exponential
SATURATED = math.inf

_RECORD_RTOL = 1e-12


@dataclass(frozen=True)
class EnergyRecord:
    """Per-time diagnostics row.

    ``S`` must equal ``mass + grad_term + potential_term`` to relative
    1e-12; the constructor enforces the decomposition so a record parsed
    back from CSV re-validates itself.  ``sigma_est`` is the fitted decay
    rate of the spectrum (``inf`` when saturated, ``nan`` when the fit is
    not available).
    """

    t: float
    S: float
    mass: float
    grad_term: float
    potential_term: float
    n_norm: float
    grad_n_norm: float
    sigma_est: float

    def __post_init__(self) -> None:
        for name in ("mass", "grad_term", "potential_term", "n_norm", "grad_n_norm"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative, got {getattr(self, name)}")
        total = self.mass + self.grad_term + self.potential_term
        scale = max(abs(self.S), abs(total), 1e-300)
        if abs(self.S - total) > _RECORD_RTOL * scale:
            raise ValueError(
                f"record decomposition violated: S={self.S!r} but "
                f"mass+grad+potential={total!r}"
            )


@dataclass(frozen=True)
class BootstrapParams:
    """Inputs to the sufficient-smallness budget for sigma."""

    theta: float
    c_boot: float
    s0: float
    t_final: float
    epsilon: float

    def __post_init__(self) -> None:
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")
        if not self.c_boot > 0:
            raise ValueError(f"c_boot must be positive, got {self.c_boot}")
        if self.s0 < 0:
            raise ValueError(f"s0 must be nonnegative, got {self.s0}")
        if not self.t_final > 0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


def _weighted(u: SpectralField, sigma: float) -> SpectralField:
    ensure_noise_guard(sigma, u.grid)
    return apply_lambda(u, sigma)


def _fine_samples(f: SpectralField, degree: int) -> tuple[np.ndarray, float]:
    """Samples on a grid resolving degree-``degree`` products, plus spacing."""
    fine_n = f.grid.fine((degree + 1) / 2.0).n_modes
    fine = to_spatial(pad_modes(f, fine_n))
    return fine.samples, fine.grid.spacing


def _energy_parts(u_weighted: SpectralField, p: int) -> tuple[float, float, float]:
    g = u_weighted.grid
    mass = float(np.sum(np.abs(u_weighted.coeffs) ** 2))
    grad = float(np.sum((g.xi * np.abs(u_weighted.coeffs)) ** 2))
    samples, spacing = _fine_samples(u_weighted, p + 1)
    potential = 2.0 / (p + 1) * spacing * float(np.sum(np.abs(samples) ** (p + 1)))
    return mass, grad, potential


def s_value(u: SpectralField, sigma: float, p: int) -> float:
    """The invariant alone, without assembling a full record."""
    mass, grad, potential = _energy_parts(_weighted(u, sigma), p)
    return mass + grad + potential


def compute_S(u: SpectralField, sigma: float, p: int, t: float = 0.0) -> EnergyRecord:
    """Full diagnostics row at one time: the three summands of S computed
    spectrally (mass, gradient) and physically (potential, on a dealiased
    fine grid), the defect norms, and the fitted spectral decay rate."""
    weighted = _weighted(u, sigma)
    mass, grad, potential = _energy_parts(weighted, p)
    defect = compute_defect(u, sigma, p)
    n_norm = defect.l2_norm()
    defect_hat = to_spectral(defect)
    grad_n_norm = float(np.linalg.norm(defect_hat.grid.xi * defect_hat.coeffs))
    try:
        sigma_est = estimate_radius(u)
    except InsufficientModes:
        sigma_est = math.nan
    return EnergyRecord(
        t=t,
        S=mass + grad + potential,
        mass=mass,
        grad_term=grad,
        potential_term=potential,
        n_norm=n_norm,
        grad_n_norm=grad_n_norm,
        sigma_est=sigma_est,
    )


def segment_records(
    traj: Trajectory, sigma: float, p: int, indices=None
) -> tuple[EnergyRecord, ...]:
    """EnergyRecords along a trajectory; defaults to its segment
    boundaries when present, otherwise every stored sample."""
    if indices is None:
        indices = traj.segment_boundaries or range(len(traj))
    return tuple(
        compute_S(traj.states[i], sigma, p, t=float(traj.times[i])) for i in indices
    )


def compute_defect(u: SpectralField, sigma: float, p: int) -> SpatialField:
    """Commutator ``N(u)`` between the exponential weight and the
    nonlinearity.  The subtraction happens in coefficient space, where
    both branches run bit-identical arithmetic at ``sigma == 0``, so the
    defect is exactly zero there."""
    weighted = _weighted(u, sigma)
    first_hat = to_spectral(nonlinearity(to_spatial(weighted), p))
    plain_hat = to_spectral(nonlinearity(to_spatial(u), p))
    last_hat = apply_lambda(plain_hat, sigma)
    return to_spatial(first_hat.with_coeffs(first_hat.coeffs - last_hat.coeffs))


def defect_bound_ratio(
    u: SpectralField, sigma: float, p: int, theta: float, gradient: bool = False
) -> float:
    """``||N(u)|| / (sigma^theta (||U||^2 + ||grad U||^2)^(p/2))``, the
    quantity whose boundedness under sigma sweeps certifies the defect
    estimate.  ``gradient=True`` puts ``||grad N(u)||`` in the numerator."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive for the ratio, got {sigma}")
    if not 0.0 < theta <= 1.0:
        raise ValueError(f"theta must lie in (0, 1], got {theta}")
    weighted = _weighted(u, sigma)
    mass = float(np.sum(np.abs(weighted.coeffs) ** 2))
    grad = float(np.sum((u.grid.xi * np.abs(weighted.coeffs)) ** 2))
    if mass + grad == 0.0:
        raise ValueError("defect_bound_ratio is undefined for the zero field")
    defect = compute_defect(u, sigma, p)
    if gradient:
        defect_hat = to_spectral(defect)
        numerator = float(np.linalg.norm(defect_hat.grid.xi * defect_hat.coeffs))
    else:
        numerator = defect.l2_norm()
    return numerator / (sigma**theta * (mass + grad) ** (p / 2.0))


@dataclass(frozen=True)
class DerivativeCheck:
    """Centered finite difference of S against the defect-flux formula."""

    fd: float
    formula: float

    @property
    def discrepancy(self) -> float:
        return abs(self.fd - self.formula)


def dS_dt_identity_check(
    traj: Trajectory, sigma: float, p: int, t_index: int
) -> DerivativeCheck:
    """Check ``dS/dt`` at an interior sample of a trajectory.

    The finite difference uses the two neighbouring samples; the formula
    side evaluates

        dS/dt = -2 Im int [ grad(U~) grad(N) + U~ N + |U|^(p-1) U~ N ] dx

    (U~ the conjugate of U, N the defect at the centre state), which is
    the conjugate-pair form of the flux identity.  Both sides converge at
    second order in the sample spacing.
    """
    if not 0 < t_index < len(traj) - 1:
        raise ValueError(
            f"t_index must be interior (0 < i < {len(traj) - 1}), got {t_index}"
        )
    t_prev, t_mid, t_next = (float(traj.times[t_index + d]) for d in (-1, 0, 1))
    s_prev = s_value(traj.states[t_index - 1], sigma, p)
    s_next = s_value(traj.states[t_index + 1], sigma, p)
    fd = (s_next - s_prev) / (t_next - t_prev)

    u = traj.states[t_index]
    weighted = _weighted(u, sigma)
    defect_hat = to_spectral(compute_defect(u, sigma, p))
    fine_n = u.grid.fine((p + 2) / 2.0).n_modes

    def fine(fld: SpectralField) -> np.ndarray:
        return to_spatial(pad_modes(fld, fine_n)).samples

    xi = u.grid.xi
    U = fine(weighted)
    dU = fine(weighted.with_coeffs(1j * xi * weighted.coeffs))
    N = fine(defect_hat)
    dN = fine(defect_hat.with_coeffs(1j * xi * defect_hat.coeffs))
    spacing = 2.0 * u.grid.half_length / fine_n

    z_grad = spacing * np.sum(np.conj(dU) * dN)
    z_mass = spacing * np.sum(np.conj(U) * N)
    z_pot = spacing * np.sum(np.abs(U) ** (p - 1) * np.conj(U) * N)
    formula = -2.0 * float(np.imag(z_grad + z_mass + z_pot))
    return DerivativeCheck(fd=fd, formula=formula)


def _fit_points(
    f: SpectralField, fit_window: tuple[float, float] | None, floor: float
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Usable (|xi|, magnitude) pairs and whether the window was nonempty."""
    mag = np.abs(f.coeffs)
    abs_xi = np.abs(f.grid.xi)
    nonzero = abs_xi > 0
    if fit_window is not None:
        lo, hi = fit_window
        if not 0 <= lo < hi:
            raise ValueError(f"fit_window must satisfy 0 <= lo < hi, got {fit_window}")
        in_window = nonzero & (abs_xi >= lo) & (abs_xi <= hi)
        usable = in_window & (mag > floor)
        return abs_xi[usable], mag[usable], bool(in_window.any())
    # default window: at least 3 decades above the floor and within 5
    # decades of the peak; the second cutoff keeps domain-truncation
    # leakage (slowly decaying profiles wrap around the periodic box at
    # the boundary-value scale) out of the fit
    peak = float(mag.max())
    usable = nonzero & (mag >= max(floor * 1e3, peak * 1e-5))
    return abs_xi[usable], mag[usable], True


def estimate_radius(
    f: SpectralField,
    fit_window: tuple[float, float] | None = None,
    floor: float = 1e-12,
) -> float:
    """Analyticity radius from spectral decay: least-squares slope of
    ``-log|f_k|`` against ``|xi_k|`` over the fit window.

    Returns ``SATURATED`` (inf) when the spectrum decays faster than any
    exponential the fit can measure: every windowed mode below the floor,
    or any per-mode fit residual above 0.5 decades (exponential decay
    leaves log-linear data; super-exponential decay bends it).  Raises
    InsufficientModes when fewer than 8 usable modes remain.
    """
    if not floor > 0:
        raise ValueError(f"floor must be positive, got {floor}")
    abs_xi, mag, window_nonempty = _fit_points(f, fit_window, floor)
    if len(mag) == 0:
        if window_nonempty:
            return SATURATED
        raise InsufficientModes("empty fit window")
    if len(mag) < 8:
        raise InsufficientModes(
            f"only {len(mag)} usable modes in the fit window; need at least 8"
        )
    y = -np.log(mag)
    slope, intercept = np.polyfit(abs_xi, y, 1)
    residual = y - (slope * abs_xi + intercept)
    max_decades = float(np.max(np.abs(residual))) / math.log(10.0)
    if max_decades > 0.5:
        return SATURATED
    return max(float(slope), 0.0)


def bootstrap_sigma(bp: BootstrapParams, p: int) -> float:
    """Sufficient smallness of sigma for the continuation argument:

        sigma = [ C (4 S0)^(p/2) (2 (4 S0)^(1/2) + (4 S0)^(p/2)) T ]^(-1/theta).
    """
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be an odd integer >= 3, got {p}")
    if not bp.s0 > 0:
        raise ValueError(f"bootstrap budget requires s0 > 0, got {bp.s0}")
    four_s0 = 4.0 * bp.s0
    bracket = (
        bp.c_boot
        * four_s0 ** (p / 2.0)
        * (2.0 * math.sqrt(four_s0) + four_s0 ** (p / 2.0))
        * bp.t_final
    )
    return bracket ** (-1.0 / bp.theta)


def sigma_final(sigma0: float, bp: BootstrapParams, p: int) -> float:
    """Radius retained up to ``t_final``: 0.99 times the smaller of the
    initial radius and the budget evaluated at ``theta = 1/(1+epsilon)``."""
    if not sigma0 > 0:
        raise ValueError(f"sigma0 must be positive, got {sigma0}")
    budget = bootstrap_sigma(replace(bp, theta=1.0 / (1.0 + bp.epsilon)), p)
    return 0.99 * min(sigma0, budget)


def self_consistent_budget(
    f: SpectralField, bp: BootstrapParams, p: int, max_iters: int = 12
) -> tuple[float, float]:
    """Fixed point of ``sigma = bootstrap_sigma(S0(sigma))``.

    ``S0`` is evaluated at the candidate sigma, so the budget is valid for
    the run that actually uses it.  Converges in a few iterations because
    the budget decreases in ``S0`` and ``S0`` moves little at small sigma.
    Returns ``(sigma, s0)`` at the fixed point.
    """
    sigma = 0.0
    s0 = s_value(f, sigma, p)
    for _ in range(max_iters):
        new_sigma = bootstrap_sigma(replace(bp, s0=s0), p)
        s0 = s_value(f, new_sigma, p)
        if abs(new_sigma - sigma) <= 1e-9 * max(new_sigma, 1e-300):
            return new_sigma, s0
        sigma = new_sigma
    return sigma, s0


@dataclass(frozen=True, eq=False)
class BootstrapVerdict:
    """Sampled continuation check: hypothesis ``S <= 4 S0`` against
    conclusion ``S <= 2 S0``."""

    times: np.ndarray
    s_values: np.ndarray
    s0: float
    hypothesis_ok: np.ndarray
    conclusion_ok: np.ndarray
    passed: bool
    first_failure_time: float | None


def bootstrap_monitor(traj: Trajectory, sigma: float, p: int, s0: float) -> BootstrapVerdict:
    """Evaluate S along the trajectory and compare with the bootstrap
    thresholds; the verdict passes iff the conclusion holds at every
    sample."""
    if not s0 > 0:
        raise ValueError(f"s0 must be positive, got {s0}")
    s_vals = np.array([s_value(state, sigma, p) for state in traj.states])
    hypothesis = s_vals <= 4.0 * s0
    conclusion = s_vals <= 2.0 * s0
    passed = bool(conclusion.all())
    first_failure = None if passed else float(traj.times[np.argmin(conclusion)])
    return BootstrapVerdict(
        times=traj.times,
        s_values=s_vals,
        s0=s0,
        hypothesis_ok=hypothesis,
        conclusion_ok=conclusion,
        passed=passed,
        first_failure_time=first_failure,
    )


def gn_alpha(p: int) -> float:
    """Interpolation exponent ``(1 - 1/p)/2`` for the ``L^{2p}`` norm."""
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be an odd integer >= 3, got {p}")
    return (1.0 - 1.0 / p) / 2.0


def gn_ratio(u: SpectralField, sigma: float, p: int) -> float:
    """``||U||_L2p / (||U||_L2^(1-alpha) ||grad U||_L2^alpha)``; the
    scale-invariant interpolation ratio, undefined for fields with no
    gradient content."""
    weighted = _weighted(u, sigma)
    alpha = gn_alpha(p)
    l2 = float(np.linalg.norm(weighted.coeffs))
    grad = float(np.linalg.norm(u.grid.xi * weighted.coeffs))
    if l2 == 0.0:
        raise ValueError("gn_ratio is undefined for the zero field")
    if grad == 0.0:
        raise ValueError("gn_ratio is undefined for constant fields (zero gradient)")
    samples, spacing = _fine_samples(weighted, 2 * p)
    l2p = (spacing * float(np.sum(np.abs(samples) ** (2 * p)))) ** (1.0 / (2 * p))
    return l2p / (l2 ** (1.0 - alpha) * grad**alpha)


def check_growth_envelope(
    traj: Trajectory, sigma: float, theta: float, c_boot: float, p: int
) -> np.ndarray:
    """Margins of the a-priori growth envelope along a trajectory:

        margin(t) = S(0) + c_boot sigma^theta
                    int_0^t S^(p/2) (2 S^(1/2) + S^(p/2)) dtau - S(t),

    cumulative trapezoid on the trajectory samples.  All margins
    nonnegative means the envelope closes with this constant.
    """
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    if not c_boot > 0:
        raise ValueError(f"c_boot must be positive, got {c_boot}")
    s_vals = np.array([s_value(state, sigma, p) for state in traj.states])
    integrand = s_vals ** (p / 2.0) * (2.0 * np.sqrt(s_vals) + s_vals ** (p / 2.0))
    cumulative = np.zeros_like(s_vals)
    if len(s_vals) > 1:
        dt = np.diff(traj.times)
        cumulative[1:] = np.cumsum(0.5 * dt * (integrand[1:] + integrand[:-1]))
    return s_vals[0] + c_boot * sigma**theta * cumulative - s_vals
