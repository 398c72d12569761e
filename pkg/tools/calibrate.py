"""Measure the empirical constants frozen in gevrey_nls/constants.py.

Run from the repository root:

    python3 tools/calibrate.py

Prints each measured quantity together with the safety-factored value to
freeze.  The product-norm and interpolation families are the ones the
verification suites use (same samplers, same seeds), so the frozen
regression constants bound exactly what the suites re-measure.  Change a
protocol here only together with the constants it feeds.
"""

import math
import time

import numpy as np

from gevrey_nls.gevrey import GevreyParams, algebra_defect, gevrey_norm, _weights
from gevrey_nls.spectral import GridSpec, SpectralField, to_spectral
from gevrey_nls.solver import (
    InitialDataSpec,
    SolverConfig,
    contraction_delta,
    make_initial_data,
    picard_solve,
    splitstep_solve,
)
from gevrey_nls.diagnostics import compute_S, defect_bound_ratio
from gevrey_nls import verification

ALGEBRA_SEED = 1234
ALGEBRA_PAIRS = 10_000

DEFECT_GRID = GridSpec(1024, 32.0, 2.0)
DEFECT_SIGMAS = (0.2, 0.1, 0.05, 0.025)
DEFECT_AMPLITUDES = (0.5, 1.0, 2.0)
DEFECT_WIDTHS = (0.75, 1.0, 1.5)

GN_SEED = 777
GN_FIELDS = 2_000


def calibrate_algebra() -> None:
    result = verification.run_suite("algebra", seed=ALGEBRA_SEED, trials=ALGEBRA_PAIRS)
    for line in result.lines:
        print(" " + line)
    overall = result.stats["max_ratio"]
    print(f"  ALGEBRA_RATIO_S1 (x1.05 headroom) = {1.05 * overall:.6f}"
          f"   [{result.stats['seconds']:.1f}s]")


def calibrate_algebra_sublevel() -> None:
    # smaller sweep at s = 0.75, used only by a boundedness property test
    grid = verification.ALGEBRA_GRID
    rng = np.random.default_rng(ALGEBRA_SEED + 1)
    worst = 0.0
    for trial in range(1_000):
        band_u, band_v = (int(b) for b in rng.choice(verification.BANDWIDTHS, size=2))
        nonneg = bool(trial % 2)
        a = verification.band_limited_coeffs(rng, grid, band_u, nonneg)
        b = verification.band_limited_coeffs(rng, grid, band_v, nonneg)
        for sigma in (0.0, 0.5):
            params = GevreyParams(sigma, 0.75)
            w = _weights(params, grid)
            worst = max(
                worst,
                algebra_defect(
                    SpectralField(a / w, grid), SpectralField(b / w, grid), params
                ),
            )
    print(f"  s=0.75 max = {worst:.6f}; ALGEBRA_RATIO_S075 (x1.25) = {1.25 * worst:.6f}")


def calibrate_defect() -> None:
    worst = 0.0
    for amp in DEFECT_AMPLITUDES:
        for width in DEFECT_WIDTHS:
            f = make_initial_data(InitialDataSpec("sech", amp, width), DEFECT_GRID)
            for sigma in DEFECT_SIGMAS:
                for gradient in (False, True):
                    r = defect_bound_ratio(f, sigma, 3, 0.5, gradient=gradient)
                    worst = max(worst, r)
    print(f"  max defect ratio = {worst:.6f}")
    print(f"  C_BOOT (x2 safety) = {2.0 * worst:.6f}")


def calibrate_gn() -> None:
    result = verification.run_suite("gn", seed=GN_SEED, trials=GN_FIELDS)
    for line in result.lines:
        print(" " + line)
    print(f"  GN_RATIO_BOUND (x1.25 safety) = {1.25 * result.stats['max_ratio']:.6f}")


def calibrate_conservation() -> None:
    # sigma = 0 weighted energy drift of the split-step integrator, p = 3
    f = make_initial_data(InitialDataSpec("sech", 1.0, 1.0), DEFECT_GRID)
    s0 = compute_S(f, 0.0, 3).S
    for dt in (2e-4, 1e-4, 5e-5):
        cfg = SolverConfig(p=3, dt_reference=dt)
        t0 = time.perf_counter()
        traj = splitstep_solve(f, 1.0, cfg)
        drift = max(
            abs(compute_S(state, 0.0, 3).S - s0) / s0 for state in traj.states
        )
        elapsed = time.perf_counter() - t0
        print(f"  dt={dt:g}: max |S-S0|/S0 = {drift:.3e}   [{elapsed:.1f}s]")


def calibrate_cross_match(c_algebra: float) -> None:
    # Picard vs split-step on sech data at t = delta/2.  Both methods are
    # second order in their step, so the node spacing is matched to dt and
    # the discrepancy is reported against h^2.
    grid = GridSpec(512, 32.0, 2.0)
    f = make_initial_data(InitialDataSpec("sech", 1.0, 1.0), grid)
    params = GevreyParams(0.1, 1.0)
    fnorm = gevrey_norm(f, params)
    c = 2.0 * c_algebra
    delta = contraction_delta(fnorm, 3, c)
    print(f"  gevrey norm = {fnorm:.6f}, C = {c:.6f}, delta = {delta:.6f}")
    t_star = 0.5 * delta
    for steps in (256, 512, 1024):
        dt = t_star / steps
        nodes = 2 * steps + 1  # node spacing delta/(nodes-1) == dt
        cfg = SolverConfig(
            p=3, contraction_constant=c, quadrature_nodes=nodes, dt_reference=dt
        )
        traj = picard_solve(f, params, cfg, delta)
        mid = (nodes - 1) // 2
        u_ref = traj.states[mid]
        straj = splitstep_solve(f, traj.times[mid], cfg, store_every=10**9)
        err = float(np.linalg.norm(straj.final_state.coeffs - u_ref.coeffs))
        print(f"  dt={dt:.3e}: l2 diff = {err:.3e}, err/dt^2 = {err / dt**2:.3f}")
    # default-config discrepancy, the value the acceptance tolerance covers
    cfg = SolverConfig(p=3, contraction_constant=c)
    traj = picard_solve(f, params, cfg, delta)
    mid = (cfg.quadrature_nodes - 1) // 2
    h = delta / (cfg.quadrature_nodes - 1)
    straj = splitstep_solve(f, traj.times[mid], cfg, store_every=10**9)
    err = float(
        np.linalg.norm(straj.final_state.coeffs - traj.states[mid].coeffs)
    )
    print(f"  default config: h={h:.3e}, diff = {err:.3e}, err/h^2 = {err / h**2:.3f}")


def calibrate_cancellation_timing() -> None:
    result = verification.run_suite("cancellation", seed=99)
    for line in result.lines:
        print(" " + line)
    print(f"  [{result.stats['seconds']:.1f}s]")


def main() -> int:
    print(f"product-norm ratios ({ALGEBRA_PAIRS} pairs, seed {ALGEBRA_SEED}):")
    calibrate_algebra()
    calibrate_algebra_sublevel()
    print("defect-bound ratios (sech family, theta=0.5):")
    calibrate_defect()
    print("interpolation ratios:")
    calibrate_gn()
    print("sigma=0 energy drift vs step size:")
    calibrate_conservation()
    print("picard vs split-step discrepancy:")
    calibrate_cross_match(0.21)
    print("cancellation margin suite:")
    calibrate_cancellation_timing()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
