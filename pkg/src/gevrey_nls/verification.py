"""Property suites for the inequalities behind the continuation argument.

Each suite re-checks one ingredient at desk scale: the exponential
cancellation margins, the product-norm (algebra) bound, embedding
constants, the interpolation ratio, the defect bounds, energy
conservation of the reference integrator at sigma = 0, the radius
estimator on profiles with known analyticity strips, and the bootstrap
closure.  Randomized suites are deterministic given their seed; bounds
are the frozen empirical constants from :mod:`gevrey_nls.constants`.

The random product-norm family samples the unit ball of the weighted
space directly: the iid draw is the weighted coefficient vector, shared
across all sigma values of a trial, so each trial compares the same
abstract element of the three spaces.  Bandwidths are drawn log-uniformly
so narrow-band draws probe the flat-weight extremal configuration and
wide-band draws probe the tail.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import constants
from .errors import ConfigError, InsufficientModes
from .gevrey import GevreyParams, _weights, algebra_defect, gevrey_norm
from .multilinear import FrequencyTuple, cancellation_margin
from .spectral import GridSpec, SpectralField
from .solver import InitialDataSpec, SolverConfig, make_initial_data, splitstep_solve
from .diagnostics import (
    SATURATED,
    BootstrapParams,
    bootstrap_monitor,
    bootstrap_sigma,
    check_growth_envelope,
    compute_S,
    defect_bound_ratio,
    estimate_radius,
    gn_ratio,
    self_consistent_budget,
)

__all__ = ["SuiteResult", "SUITE_NAMES", "run_suite", "band_limited_coeffs"]

ALGEBRA_GRID = GridSpec(256, 32.0, 2.0)
ALGEBRA_SIGMAS = (0.0, 0.2, 0.5)
BANDWIDTHS = (1, 2, 4, 8, 16, 32, 64)

SOLVER_GRID = GridSpec(1024, 32.0, 2.0)
NBOUND_SIGMAS = (0.2, 0.1, 0.05, 0.025)


@dataclass(frozen=True)
class SuiteResult:
    """Outcome of one verification suite."""

    name: str
    passed: bool
    trials: int
    lines: tuple[str, ...]
    stats: dict[str, float]
    violating_case: dict | None = None


def band_limited_coeffs(
    rng: np.random.Generator, grid: GridSpec, band: int, nonneg: bool = False
) -> np.ndarray:
    """Raw iid complex-Gaussian coefficients supported on ``|k| <= band``
    (or ``0 <= k <= band`` when ``nonneg``), in FFT mode order."""
    if not 1 <= band <= grid.n_modes // 2 - 1:
        raise ValueError(f"band must lie in [1, {grid.n_modes // 2 - 1}], got {band}")
    ks = np.arange(0 if nonneg else -band, band + 1)
    hat = np.zeros(grid.n_modes, dtype=np.complex128)
    hat[ks % grid.n_modes] = rng.standard_normal(len(ks)) + 1j * rng.standard_normal(
        len(ks)
    )
    return hat


def _suite_algebra(seed: int, trials: int) -> SuiteResult:
    grid = ALGEBRA_GRID
    rng = np.random.default_rng(seed)
    params = {s: GevreyParams(s, 1.0) for s in ALGEBRA_SIGMAS}
    weights = {s: _weights(params[s], grid) for s in ALGEBRA_SIGMAS}
    ratios = {s: np.empty(trials) for s in ALGEBRA_SIGMAS}
    worst = (-1.0, None)
    t0 = time.perf_counter()
    for trial in range(trials):
        band_u, band_v = (int(b) for b in rng.choice(BANDWIDTHS, size=2))
        nonneg = bool(trial % 2)
        a = band_limited_coeffs(rng, grid, band_u, nonneg)
        b = band_limited_coeffs(rng, grid, band_v, nonneg)
        for sigma in ALGEBRA_SIGMAS:
            u = SpectralField(a / weights[sigma], grid)
            v = SpectralField(b / weights[sigma], grid)
            r = algebra_defect(u, v, params[sigma])
            ratios[sigma][trial] = r
            if r > worst[0]:
                worst = (
                    r,
                    {
                        "trial": trial,
                        "seed": seed,
                        "sigma": sigma,
                        "band_u": band_u,
                        "band_v": band_v,
                        "nonneg": nonneg,
                        "ratio": r,
                    },
                )
    elapsed = time.perf_counter() - t0
    maxima = {s: float(ratios[s].max()) for s in ALGEBRA_SIGMAS}
    overall = max(maxima.values())
    spread = (overall - min(maxima.values())) / (
        sum(maxima.values()) / len(maxima)
    )
    bound_ok = overall <= constants.ALGEBRA_RATIO_S1
    spread_ok = spread <= constants.ALGEBRA_SIGMA_SPREAD
    lines = [
        f"product-norm ratios, {trials} paired trials, s = 1",
    ]
    for s in ALGEBRA_SIGMAS:
        lines.append(
            f"  sigma={s}: max ratio {maxima[s]:.8f}, mean {ratios[s].mean():.6f}"
        )
    lines.append(
        f"  max {overall:.8f} vs frozen bound {constants.ALGEBRA_RATIO_S1} "
        f"-> {'ok' if bound_ok else 'VIOLATED'}"
    )
    lines.append(
        f"  per-sigma max spread {100 * spread:.3f}% vs "
        f"{100 * constants.ALGEBRA_SIGMA_SPREAD:.0f}% -> "
        f"{'ok' if spread_ok else 'VIOLATED'}"
    )
    passed = bound_ok and spread_ok
    stats = {
        "max_ratio": overall,
        "sigma_spread": spread,
        "seconds": elapsed,
        **{f"max_sigma_{s}": maxima[s] for s in ALGEBRA_SIGMAS},
    }
    return SuiteResult(
        "algebra",
        passed,
        trials,
        tuple(lines),
        stats,
        None if passed else worst[1],
    )


def _suite_cancellation(seed: int, trials: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    thetas = (0.0, 0.25, 0.5, 0.75, 1.0)
    worst = (math.inf, None)
    t0 = time.perf_counter()
    for trial in range(trials):
        n = int(rng.integers(2, 8))
        etas = tuple(float(x) for x in rng.uniform(-50.0, 50.0, size=n))
        sigma = float(rng.uniform(0.0, 2.0))
        if sigma == 0.0:
            sigma = 1e-9
        theta = float(thetas[rng.integers(0, len(thetas))])
        tup = FrequencyTuple(etas, sigma, theta)
        m = cancellation_margin(tup)
        if m < worst[0]:
            worst = (
                m,
                {
                    "trial": trial,
                    "seed": seed,
                    "etas": list(etas),
                    "sigma": sigma,
                    "theta": theta,
                    "margin": m,
                },
            )
    elapsed = time.perf_counter() - t0
    passed = worst[0] >= -1e-12
    lines = (
        f"cancellation margins, {trials} random tuples, n in 2..7",
        f"  min margin {worst[0]:.6e} (tolerance -1e-12) -> "
        f"{'ok' if passed else 'VIOLATED'}",
    )
    stats = {"min_margin": worst[0], "seconds": elapsed}
    return SuiteResult(
        "cancellation", passed, trials, lines, stats, None if passed else worst[1]
    )


# (source params, target params); targets are never stronger than sources
_EMBEDDING_PAIRS = (
    (GevreyParams(0.5, 1.0), GevreyParams(0.2, 1.0)),
    (GevreyParams(0.5, 0.0), GevreyParams(0.25, 2.0)),
    (GevreyParams(0.3, 2.0), GevreyParams(0.3, 1.0)),
    (GevreyParams(0.4, 1.0), GevreyParams(0.1, 0.5)),
)


def _suite_embedding(seed: int, trials: int) -> SuiteResult:
    from .gevrey import embedding_constant

    grid = GridSpec(512, 32.0, 2.0)
    rng = np.random.default_rng(seed)
    lines = [f"embedding constants on n={grid.n_modes}, {trials} random fields/pair"]
    passed = True
    worst_excess = 0.0
    violating = None
    stats: dict[str, float] = {}
    t0 = time.perf_counter()
    for idx, (src, tgt) in enumerate(_EMBEDDING_PAIRS):
        const = embedding_constant(src, tgt, grid)
        ratio_grid = _weights(tgt, grid) / _weights(src, grid)
        sharp = float(ratio_grid.max())
        # norm-ratio property over random fields, plus sharpness at the
        # extremal grid mode
        k_star = int(np.argmax(ratio_grid))
        hat = np.zeros(grid.n_modes, dtype=np.complex128)
        hat[k_star] = 1.0
        extremal = SpectralField(hat, grid)
        attained = gevrey_norm(extremal, tgt) / gevrey_norm(extremal, src)
        excess = 0.0
        for _ in range(trials):
            band = int(rng.choice(BANDWIDTHS))
            f = SpectralField(band_limited_coeffs(rng, grid, band), grid)
            ratio = gevrey_norm(f, tgt) / gevrey_norm(f, src)
            excess = max(excess, ratio / const - 1.0)
        ok = (
            excess <= 1e-12
            and abs(const - sharp) <= 1e-12 * sharp
            and abs(attained - const) <= 1e-12 * const
        )
        passed = passed and ok
        worst_excess = max(worst_excess, excess)
        lines.append(
            f"  ({src.sigma},{src.s}) -> ({tgt.sigma},{tgt.s}): "
            f"constant {const:.6f}, max excess {excess:.2e} -> "
            f"{'ok' if ok else 'VIOLATED'}"
        )
        stats[f"constant_{idx}"] = const
        if not ok and violating is None:
            violating = {
                "source": (src.sigma, src.s),
                "target": (tgt.sigma, tgt.s),
                "constant": const,
                "max_excess": excess,
            }
    stats["max_excess"] = worst_excess
    stats["seconds"] = time.perf_counter() - t0
    return SuiteResult(
        "embedding", passed, trials * len(_EMBEDDING_PAIRS), tuple(lines), stats, violating
    )


def _suite_gn(seed: int, trials: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    grid = ALGEBRA_GRID
    worst = (-1.0, None)
    t0 = time.perf_counter()
    for trial in range(trials):
        band = int(rng.choice(BANDWIDTHS))
        spec = InitialDataSpec("random_bandlimited", 1.0, 64.0 / band)
        u = make_initial_data(spec, grid, rng)
        for sigma in (0.0, 0.1):
            r = gn_ratio(u, sigma, 3)
            if r > worst[0]:
                worst = (
                    r,
                    {"trial": trial, "seed": seed, "band": band, "sigma": sigma,
                     "ratio": r},
                )
    for kind in ("sech", "gaussian", "lorentzian"):
        f = make_initial_data(InitialDataSpec(kind, 1.0, 1.0), SOLVER_GRID)
        for sigma in (0.0, 0.1):
            r = gn_ratio(f, sigma, 3)
            if r > worst[0]:
                worst = (r, {"profile": kind, "sigma": sigma, "ratio": r})
    elapsed = time.perf_counter() - t0
    passed = worst[0] <= constants.GN_RATIO_BOUND
    lines = (
        f"interpolation ratios, {trials} random fields + named profiles",
        f"  max ratio {worst[0]:.6f} vs frozen bound {constants.GN_RATIO_BOUND} "
        f"-> {'ok' if passed else 'VIOLATED'}",
    )
    stats = {"max_ratio": worst[0], "seconds": elapsed}
    return SuiteResult("gn", passed, trials, lines, stats, None if passed else worst[1])


def _suite_nbound(seed: int, trials: int) -> SuiteResult:
    f = make_initial_data(InitialDataSpec("sech", 1.0, 1.0), SOLVER_GRID)
    t0 = time.perf_counter()
    plain = [defect_bound_ratio(f, s, 3, 0.5) for s in NBOUND_SIGMAS]
    grad = [defect_bound_ratio(f, s, 3, 0.5, gradient=True) for s in NBOUND_SIGMAS]
    elapsed = time.perf_counter() - t0
    bounded = max(max(plain), max(grad)) <= constants.C_BOOT
    # sigma decreases along the list; growth toward sigma -> 0 would show
    # as a strictly increasing sequence
    grows = all(b > a for a, b in zip(plain, plain[1:])) or all(
        b > a for a, b in zip(grad, grad[1:])
    )
    passed = bounded and not grows
    lines = (
        f"defect-bound ratios, sech data, theta = 0.5, sigma = {NBOUND_SIGMAS}",
        "  plain:    " + ", ".join(f"{r:.6f}" for r in plain),
        "  gradient: " + ", ".join(f"{r:.6f}" for r in grad),
        f"  bounded by {constants.C_BOOT} -> {'ok' if bounded else 'VIOLATED'}; "
        f"monotone growth -> {'VIOLATED' if grows else 'none'}",
    )
    stats = {
        "max_ratio": max(max(plain), max(grad)),
        "seconds": elapsed,
        **{f"plain_{s}": r for s, r in zip(NBOUND_SIGMAS, plain)},
        **{f"grad_{s}": r for s, r in zip(NBOUND_SIGMAS, grad)},
    }
    violating = None
    if not passed:
        violating = {"sigmas": list(NBOUND_SIGMAS), "plain": plain, "grad": grad}
    return SuiteResult(
        "nbound", passed, 2 * len(NBOUND_SIGMAS), lines, stats, violating
    )


def _suite_conservation(seed: int, trials: int) -> SuiteResult:
    f = make_initial_data(InitialDataSpec("sech", 1.0, 1.0), SOLVER_GRID)
    cfg = SolverConfig(p=3)
    t0 = time.perf_counter()
    traj = splitstep_solve(f, 1.0, cfg)
    s0 = compute_S(f, 0.0, 3).S
    drift = max(abs(compute_S(u, 0.0, 3).S - s0) / s0 for u in traj.states)
    elapsed = time.perf_counter() - t0
    passed = drift < 1e-8
    lines = (
        f"sigma=0 energy drift, sech data, T=1, dt={cfg.dt_reference:g}, "
        f"n={SOLVER_GRID.n_modes}",
        f"  max |S - S0|/S0 = {drift:.3e} (tolerance 1e-8) -> "
        f"{'ok' if passed else 'VIOLATED'}",
    )
    stats = {"max_drift": drift, "s0": s0, "seconds": elapsed}
    violating = None if passed else {"drift": drift, "dt": cfg.dt_reference}
    return SuiteResult("conservation", passed, len(traj), lines, stats, violating)


_RADIUS_CASES = (
    ("sech", 1.0, math.pi / 2.0),
    ("lorentzian", 1.0, 1.0),
    ("gaussian", 1.0, SATURATED),
)


def _suite_radius(seed: int, trials: int) -> SuiteResult:
    t0 = time.perf_counter()
    lines = ["radius estimates on profiles with known strips"]
    passed = True
    stats: dict[str, float] = {}
    violating = None
    for kind, width, expected in _RADIUS_CASES:
        f = make_initial_data(InitialDataSpec(kind, 1.0, width), SOLVER_GRID)
        est = estimate_radius(f)
        if math.isinf(expected):
            ok = math.isinf(est)
            desc = f"saturated={math.isinf(est)}"
        else:
            ok = math.isfinite(est) and abs(est - expected) <= 0.05 * expected
            desc = f"estimate {est:.4f} vs {expected:.4f}"
        passed = passed and ok
        lines.append(f"  {kind}: {desc} -> {'ok' if ok else 'VIOLATED'}")
        stats[f"radius_{kind}"] = est
        if not ok and violating is None:
            violating = {"profile": kind, "estimate": est, "expected": expected}
    stats["seconds"] = time.perf_counter() - t0
    return SuiteResult("radius", passed, len(_RADIUS_CASES), tuple(lines), stats, violating)


def _suite_bootstrap(seed: int, trials: int) -> SuiteResult:
    f = make_initial_data(InitialDataSpec("sech", 1.0, 1.0), SOLVER_GRID)
    bp = BootstrapParams(
        theta=0.5, c_boot=constants.C_BOOT, s0=1.0, t_final=1.0, epsilon=1.0
    )
    t0 = time.perf_counter()
    sigma, s0 = self_consistent_budget(f, bp, 3)
    cfg = SolverConfig(p=3)
    traj = splitstep_solve(f, 1.0, cfg)
    verdict = bootstrap_monitor(traj, sigma, 3, s0)
    margins = check_growth_envelope(traj, sigma, 0.5, constants.C_BOOT, 3)
    t_values = (0.5, 1.0, 2.0, 4.0)
    import dataclasses

    budgets = [
        bootstrap_sigma(dataclasses.replace(bp, s0=s0, t_final=t), 3)
        for t in t_values
    ]
    slope = float(
        np.polyfit(np.log(np.array(t_values)), np.log(np.array(budgets)), 1)[0]
    )
    elapsed = time.perf_counter() - t0
    monitor_ok = verdict.passed
    margins_ok = bool(margins.min() >= 0.0)
    slope_ok = abs(slope + 2.0) <= 1e-10
    passed = monitor_ok and margins_ok and slope_ok
    lines = (
        f"bootstrap closure, sech data, theta = 0.5, C = {constants.C_BOOT}",
        f"  self-consistent budget sigma = {sigma:.6e}, S0 = {s0:.6f}",
        f"  conclusion S <= 2 S0 on [0,1] -> {'ok' if monitor_ok else 'VIOLATED'}",
        f"  envelope margins min {margins.min():.3e} -> "
        f"{'ok' if margins_ok else 'VIOLATED'}",
        f"  budget T-scaling slope {slope:.12f} (expect -2) -> "
        f"{'ok' if slope_ok else 'VIOLATED'}",
    )
    stats = {
        "sigma_budget": sigma,
        "s0": s0,
        "min_margin": float(margins.min()),
        "t_slope": slope,
        "seconds": elapsed,
    }
    violating = None
    if not passed:
        violating = {
            "sigma": sigma,
            "s0": s0,
            "first_failure_time": verdict.first_failure_time,
            "min_margin": float(margins.min()),
            "slope": slope,
        }
    return SuiteResult("bootstrap", passed, len(traj), lines, stats, violating)


_SUITES: dict[str, tuple[Callable[[int, int], SuiteResult], int]] = {
    "algebra": (_suite_algebra, 10_000),
    "cancellation": (_suite_cancellation, 100_000),
    "embedding": (_suite_embedding, 200),
    "gn": (_suite_gn, 2_000),
    "nbound": (_suite_nbound, 0),
    "conservation": (_suite_conservation, 0),
    "radius": (_suite_radius, 0),
    "bootstrap": (_suite_bootstrap, 0),
}

SUITE_NAMES = tuple(_SUITES)


def run_suite(name: str, seed: int = 0, trials: int | None = None) -> SuiteResult:
    """Run one verification suite.

    Randomized suites (algebra, cancellation, embedding, gn) honor
    ``seed`` and ``trials``; the rest are deterministic and ignore both.
    """
    try:
        fn, default_trials = _SUITES[name]
    except KeyError:
        raise ConfigError(
            f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}"
        ) from None
    n = default_trials if trials is None else trials
    if n < 0:
        raise ConfigError(f"trials must be nonnegative, got {n}")
    return fn(seed, n)
