"""Solvers: certified Picard iteration, split-step reference, continuation.

The plane wave u = a e^{i(k x - omega t)} with omega = xi_k^2 + |a|^{p-1}
solves the equation exactly and anchors most oracles here.
"""

import math

import numpy as np
import pytest

from gevrey_nls.errors import BlowupSuspected, MaxIters, NoContraction, StepTooLarge
from gevrey_nls.gevrey import GevreyParams, gevrey_norm
from gevrey_nls.solver import (
    InitialDataSpec,
    SolverConfig,
    Trajectory,
    contraction_delta,
    continue_solution,
    duhamel_apply,
    make_initial_data,
    picard_solve,
    splitstep_solve,
)
from gevrey_nls.spectral import GridSpec, free_evolution


def _plane_wave(grid, amplitude, mode):
    width = 2.0 * grid.half_length / mode
    return make_initial_data(InitialDataSpec("plane_wave", amplitude, width), grid)


def _phase_error(field, reference_field):
    # largest coefficient phase difference on the occupied modes
    occupied = np.abs(reference_field.coeffs) > 1e-8
    diff = field.coeffs[occupied] / reference_field.coeffs[occupied]
    return float(np.max(np.abs(np.angle(diff))))


def test_config_validation():
    for bad in ({"p": 2}, {"p": 1}, {"picard_tol": 0.0}, {"max_picard_iters": 0},
                {"quadrature_nodes": 1}, {"dt_reference": -1.0}, {"blowup_ceiling": 0.0},
                {"contraction_constant": 0.0}):
        with pytest.raises(ValueError):
            SolverConfig(**bad)


def test_initial_data_kinds(grid512):
    with pytest.raises(ValueError):
        InitialDataSpec("square")
    with pytest.raises(ValueError):
        InitialDataSpec("sech", width=0.0)
    # known radii: pi/2 * width for sech, width for the lorentzian pole
    assert InitialDataSpec("sech", width=2.0).known_radius == pytest.approx(math.pi)
    assert InitialDataSpec("lorentzian").known_radius == 1.0
    assert InitialDataSpec("gaussian").known_radius == math.inf
    with pytest.raises(ValueError):
        make_initial_data(InitialDataSpec("plane_wave", width=0.01), grid512)


def test_random_bandlimited_normalized(grid512, rng):
    spec = InitialDataSpec("random_bandlimited", amplitude=2.5, width=1.0)
    f = make_initial_data(spec, grid512, rng)
    assert f.l2_norm() == pytest.approx(2.5, rel=1e-12)


def test_contraction_delta_frozen():
    # 0.9 / (2 C ||f||^{p-1})
    assert contraction_delta(1.0, 3, 1.0) == pytest.approx(0.45, abs=0)
    assert contraction_delta(2.0, 3, 1.0) == pytest.approx(0.1125, abs=0)
    assert contraction_delta(1.0, 5, 2.0) == pytest.approx(0.225, abs=0)
    with pytest.raises(ValueError):
        contraction_delta(0.0, 3, 1.0)
    with pytest.raises(ValueError):
        contraction_delta(1.0, 4, 1.0)


def test_duhamel_single_mode_exact():
    # for a single mode the interaction-picture integrand is constant, so
    # the trapezoid rule is exact: u(t) = e^{itD} f (1 - i a^2 t) after one
    # application of the map to the free trajectory
    grid = GridSpec(256, 16.0, 2.0)
    a, mode = 0.7, 5
    f = _plane_wave(grid, a, mode)
    times = np.linspace(0.0, 0.3, 21)
    params = GevreyParams(0.0, 1.0)
    candidate = Trajectory(times, tuple(free_evolution(f, t) for t in times), params)
    out = duhamel_apply(candidate, f, SolverConfig())
    xi = math.pi * mode / 16.0
    for t, state in zip(out.times, out.states):
        expected = f.coeffs * np.exp(-1j * xi**2 * t) * (1.0 - 1j * a**2 * t)
        assert np.max(np.abs(state.coeffs - expected)) < 1e-13


def test_picard_rejects_oversized_delta(sech512):
    params = GevreyParams(0.1, 1.0)
    cfg = SolverConfig()
    budget = contraction_delta(gevrey_norm(sech512, params), cfg.p, cfg.contraction_constant)
    with pytest.raises(ValueError, match="contraction step"):
        picard_solve(sech512, params, cfg, budget * 1.5)


def test_picard_requires_subcritical_s(sech512):
    with pytest.raises(ValueError, match="s >"):
        picard_solve(sech512, GevreyParams(0.1, 0.5), SolverConfig(), 0.01)


def test_picard_diverges_without_contraction(sech512):
    # an absurdly optimistic constant certifies a huge step; the iteration
    # must detect the divergence rather than return garbage
    cfg = SolverConfig(contraction_constant=1e-6)
    with pytest.raises(NoContraction):
        picard_solve(sech512, GevreyParams(0.1, 1.0), cfg, 10.0)


def test_picard_contraction_certificate(sech512):
    params = GevreyParams(0.1, 1.0)
    cfg = SolverConfig()
    delta = contraction_delta(gevrey_norm(sech512, params), cfg.p, cfg.contraction_constant)
    diffs = []
    picard_solve(sech512, params, cfg, delta, callback=lambda i, d: diffs.append(d))
    assert len(diffs) >= 3
    ratios = [b / a for a, b in zip(diffs, diffs[1:])]
    assert max(ratios) <= 0.95
    assert diffs[-1] <= cfg.picard_tol


def test_picard_plane_wave_dispersion():
    grid = GridSpec(256, 16.0, 2.0)
    a, mode, p = 0.5, 8, 3
    f = _plane_wave(grid, a, mode)
    params = GevreyParams(0.0, 1.0)
    cfg = SolverConfig()
    delta = contraction_delta(gevrey_norm(f, params), p, cfg.contraction_constant)
    traj = picard_solve(f, params, cfg, delta)
    xi = math.pi * mode / 16.0
    omega = xi**2 + a ** (p - 1)
    expected = f.coeffs * np.exp(-1j * omega * delta)
    assert np.max(np.abs(traj.final_state.coeffs - expected)) < 1e-8


def test_splitstep_plane_wave_dispersion():
    grid = GridSpec(256, 16.0, 2.0)
    a, mode, p = 0.5, 8, 3
    f = _plane_wave(grid, a, mode)
    t_final = 0.25
    traj = splitstep_solve(f, t_final, SolverConfig())
    xi = math.pi * mode / 16.0
    omega = xi**2 + a ** (p - 1)
    exact = f.with_coeffs(f.coeffs * np.exp(-1j * omega * t_final))
    assert _phase_error(traj.final_state, exact) < 1e-10


def test_splitstep_conserves_mass(grid256, rng):
    spec = InitialDataSpec("random_bandlimited", amplitude=1.0, width=2.0)
    f = make_initial_data(spec, grid256, rng)
    traj = splitstep_solve(f, 0.1, SolverConfig(dt_reference=5e-4))
    assert traj.final_state.l2_norm() == pytest.approx(f.l2_norm(), rel=1e-13)


def test_splitstep_step_guard(sech1024):
    # n = 1024 on L = 32 has xi_max^2 ~ 2527; dt = 1e-3 violates the phase
    # resolution guard
    with pytest.raises(StepTooLarge):
        splitstep_solve(sech1024, 0.1, SolverConfig(dt_reference=1e-3))


def test_splitstep_rejects_nonpositive_time(sech512):
    with pytest.raises(ValueError):
        splitstep_solve(sech512, 0.0, SolverConfig())


def test_trajectory_validation(grid256):
    f = _plane_wave(grid256, 1.0, 3)
    params = GevreyParams(0.0, 1.0)
    with pytest.raises(ValueError):
        Trajectory(np.array([0.1, 0.2]), (f, f), params)  # must start at 0
    with pytest.raises(ValueError):
        Trajectory(np.array([0.0, 0.0]), (f, f), params)  # strictly increasing
    with pytest.raises(ValueError):
        Trajectory(np.array([0.0, 0.1]), (f,), params)  # length mismatch


def test_continuation_zero_datum(grid256):
    f = _plane_wave(grid256, 1.0, 3)
    zero = f.with_coeffs(np.zeros_like(f.coeffs))
    traj = continue_solution(zero, 1.0, GevreyParams(0.1, 1.0), SolverConfig())
    assert float(traj.times[-1]) == 1.0
    assert all(np.all(s.coeffs == 0.0) for s in traj.states)


def test_continuation_segments_and_cross_check(sech512):
    params = GevreyParams(0.1, 1.0)
    cfg = SolverConfig(dt_reference=5e-4)
    t_final = 0.5
    traj = continue_solution(sech512, t_final, params, cfg)
    assert float(traj.times[-1]) == pytest.approx(t_final, rel=1e-12)
    assert len(traj.segment_boundaries) >= 3  # start plus at least two segments
    bounds = traj.segment_boundaries
    assert bounds[0] == 0 and bounds[-1] == len(traj) - 1
    assert all(a < b for a, b in zip(bounds, bounds[1:]))

    reference = splitstep_solve(sech512, t_final, cfg, params=params)
    diff = traj.final_state.with_coeffs(
        traj.final_state.coeffs - reference.final_state.coeffs
    )
    assert gevrey_norm(diff, params) < 1e-3


def test_continuation_blowup_guard(sech512):
    cfg = SolverConfig(blowup_ceiling=1e-3)
    with pytest.raises(BlowupSuspected):
        continue_solution(sech512, 0.5, GevreyParams(0.1, 1.0), cfg)


def test_lipschitz_dependence_on_data(grid256):
    # two nearby data evolved over one certified step stay within the
    # contraction bound ||f - g|| / (1 - 2 C delta R^{p-1})
    params = GevreyParams(0.1, 1.0)
    cfg = SolverConfig()
    f = make_initial_data(InitialDataSpec("sech"), grid256)
    g = f.with_coeffs(f.coeffs * (1.0 + 1e-4))
    # the step must be certified for the larger of the two data
    norm_max = max(gevrey_norm(f, params), gevrey_norm(g, params))
    delta = contraction_delta(norm_max, cfg.p, cfg.contraction_constant)

    traj_f = picard_solve(f, params, cfg, delta)
    traj_g = picard_solve(g, params, cfg, delta)
    data_dist = gevrey_norm(f.with_coeffs(g.coeffs - f.coeffs), params)
    radius = max(
        gevrey_norm(s, params) for t in (traj_f, traj_g) for s in t.states
    )
    denom = 1.0 - 2.0 * cfg.contraction_constant * delta * radius ** (cfg.p - 1)
    assert denom > 0
    bound = data_dist / denom
    worst = max(
        gevrey_norm(a.with_coeffs(a.coeffs - b.coeffs), params)
        for a, b in zip(traj_f.states, traj_g.states)
    )
    assert worst <= bound
