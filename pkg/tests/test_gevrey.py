"""Weighted norms: closed-form oracles, the noise guard, embeddings,
and the product (algebra) estimate."""

import math

import numpy as np
import pytest

from gevrey_nls import constants
from gevrey_nls.errors import NoiseGuardViolation
from gevrey_nls.gevrey import (
    GevreyParams,
    algebra_defect,
    apply_lambda,
    embedding_constant,
    gevrey_norm,
    noise_guard_limit,
)
from gevrey_nls.spectral import GridSpec, SpatialField, SpectralField, to_spectral
from gevrey_nls.verification import band_limited_coeffs

# ||e^{-x^2/2}||_L2 = pi^{1/4}
GAUSSIAN_L2 = 1.3313353638003897

# G^{sigma,0} norm of the gaussian: sqrt(sqrt(pi) e^{sigma^2} (1 + erf(sigma)))
# at sigma = 1/2
GAUSSIAN_G_HALF = 1.8602335518443376


def _gaussian(grid):
    return to_spectral(SpatialField(np.exp(-(grid.x**2) / 2.0), grid))


def test_params_validation():
    with pytest.raises(ValueError):
        GevreyParams(-0.1, 1.0)
    with pytest.raises(ValueError):
        GevreyParams(0.1, math.nan)
    with pytest.raises(ValueError):
        GevreyParams(0.1, math.inf)


def test_noise_guard_limit_frozen(grid1024, grid512):
    # ln(tol/eps)/xi_max at tol = 1e-6, double precision
    assert noise_guard_limit(grid1024) == pytest.approx(0.44221485091633234, rel=1e-12)
    assert noise_guard_limit(grid512) == pytest.approx(2 * 0.44221485091633234, rel=1e-12)


def test_noise_guard_raises(grid1024, grid512):
    f = _gaussian(grid1024)
    with pytest.raises(NoiseGuardViolation):
        gevrey_norm(f, GevreyParams(0.5, 1.0))
    # same sigma is fine on the coarser band
    assert gevrey_norm(_gaussian(grid512), GevreyParams(0.5, 1.0)) > 0


def test_gaussian_l2(grid1024):
    got = gevrey_norm(_gaussian(grid1024), GevreyParams(0.0, 0.0))
    assert got == pytest.approx(GAUSSIAN_L2, abs=1e-12)


def test_gaussian_gevrey_closed_form_convergence():
    # the G^{1/2,0} norm has the closed form frozen above; the discrete
    # quadrature in xi converges at second order as the xi-spacing halves
    errs = []
    for half_length, n in ((32.0, 512), (64.0, 1024), (128.0, 2048)):
        grid = GridSpec(n, half_length, 2.0)
        got = gevrey_norm(_gaussian(grid), GevreyParams(0.5, 0.0))
        errs.append(abs(got - GAUSSIAN_G_HALF))
    assert errs[0] < 5e-4
    assert 3.5 < errs[0] / errs[1] < 4.5
    assert 3.5 < errs[1] / errs[2] < 4.5


def test_apply_lambda_semigroup(grid512, rng):
    coeffs = band_limited_coeffs(rng, grid512, 32)
    f = SpectralField(coeffs, grid512)
    one = apply_lambda(apply_lambda(f, 0.3), 0.2)
    two = apply_lambda(f, 0.5)
    assert np.max(np.abs(one.coeffs - two.coeffs)) < 1e-12 * np.max(np.abs(two.coeffs))
    ident = apply_lambda(f, 0.0)
    np.testing.assert_array_equal(ident.coeffs, f.coeffs)


def test_gevrey_norm_monotone_in_weights(grid512, rng):
    f = SpectralField(band_limited_coeffs(rng, grid512, 64), grid512)
    norms_sigma = [gevrey_norm(f, GevreyParams(s, 1.0)) for s in (0.0, 0.1, 0.2)]
    assert norms_sigma[0] < norms_sigma[1] < norms_sigma[2]
    norms_s = [gevrey_norm(f, GevreyParams(0.1, s)) for s in (0.0, 1.0, 2.0)]
    assert norms_s[0] < norms_s[1] < norms_s[2]


def test_embedding_rejects_unbounded_pairs(grid512):
    with pytest.raises(ValueError):
        embedding_constant(GevreyParams(0.2, 1.0), GevreyParams(0.5, 1.0), grid512)
    with pytest.raises(ValueError):
        embedding_constant(GevreyParams(0.2, 1.0), GevreyParams(0.2, 2.0), grid512)


def test_embedding_constant_analytic_argmax(grid512):
    # losing sigma = 1/4 while gaining two powers of <xi>: the continuum
    # ratio e^{-xi/4}(1 + xi^2) peaks at xi* = 4 + sqrt(15)
    source, target = GevreyParams(0.5, 0.0), GevreyParams(0.25, 2.0)
    c = embedding_constant(source, target, grid512)
    xi_star = 4.0 + math.sqrt(15.0)
    continuum = math.exp(-0.25 * xi_star) * (1.0 + xi_star**2)
    assert c <= continuum * (1.0 + 1e-12)  # grid max cannot beat the continuum
    assert c > continuum * (1.0 - 1e-3)  # and the grid nearly attains it


def test_embedding_same_params_is_identity(grid512):
    params = GevreyParams(0.3, 1.0)
    assert embedding_constant(params, params, grid512) == pytest.approx(1.0, abs=0)


def test_embedding_bounds_random_fields(grid512, rng):
    source, target = GevreyParams(0.4, 1.0), GevreyParams(0.1, 0.5)
    c = embedding_constant(source, target, grid512)
    for _ in range(50):
        f = SpectralField(band_limited_coeffs(rng, grid512, 64), grid512)
        ratio = gevrey_norm(f, target) / gevrey_norm(f, source)
        assert ratio <= c * (1.0 + 1e-12)


def test_embedding_sharp_on_extremal_mode(grid512):
    source, target = GevreyParams(0.5, 0.0), GevreyParams(0.25, 2.0)
    c = embedding_constant(source, target, grid512)
    xi = np.abs(grid512.xi)
    ratio = np.exp(-0.25 * xi) * (1.0 + xi**2)
    k = int(np.argmax(ratio))
    coeffs = np.zeros(512, dtype=np.complex128)
    coeffs[k] = 1.0
    f = SpectralField(coeffs, grid512)
    attained = gevrey_norm(f, target) / gevrey_norm(f, source)
    assert attained == pytest.approx(c, rel=1e-12)


@pytest.mark.parametrize("k", [3, 17])
@pytest.mark.parametrize("sigma", [0.0, 0.3])
@pytest.mark.parametrize("s", [1.0, 2.0])
def test_algebra_single_mode_oracle(grid256, k, sigma, s):
    # for u = v = one mode at xi, the product sits on mode 2k and the ratio
    # collapses to <2 xi>^s / (sqrt(2L) <xi>^{2s}); the exponential weight
    # cancels identically, so sigma must not matter
    coeffs = np.zeros(256, dtype=np.complex128)
    coeffs[k] = 1.7 - 0.4j
    u = SpectralField(coeffs, grid256)
    xi = grid256.xi[k]
    expected = (1.0 + 4.0 * xi**2) ** (s / 2.0) / (
        math.sqrt(64.0) * (1.0 + xi**2) ** s
    )
    got = algebra_defect(u, u, GevreyParams(sigma, s))
    assert got == pytest.approx(expected, rel=1e-13)


def test_algebra_defect_validation(grid256, rng):
    u = SpectralField(band_limited_coeffs(rng, grid256, 16), grid256)
    zero = u.with_coeffs(np.zeros_like(u.coeffs))
    with pytest.raises(ValueError):
        algebra_defect(u, u, GevreyParams(0.1, 0.5))  # s at the borderline
    with pytest.raises(ValueError):
        algebra_defect(u, zero, GevreyParams(0.1, 1.0))
    other = SpectralField(np.zeros(512, dtype=np.complex128), GridSpec(512, 32.0, 2.0))
    with pytest.raises(ValueError):
        algebra_defect(u, other, GevreyParams(0.1, 1.0))


def test_algebra_ratio_within_frozen_constant(grid256, rng):
    # spot check of the calibrated product constant at s = 1 on fresh draws;
    # the full 10^4-pair certification runs in the acceptance suite
    params = [GevreyParams(sig, 1.0) for sig in (0.0, 0.2, 0.5)]
    worst = 0.0
    for trial in range(300):
        band = int(rng.choice([2, 8, 32, 64]))
        u = SpectralField(band_limited_coeffs(rng, grid256, band), grid256)
        v = SpectralField(band_limited_coeffs(rng, grid256, band), grid256)
        for prm in params:
            worst = max(worst, algebra_defect(u, v, prm))
    assert worst <= constants.ALGEBRA_RATIO_S1


def test_algebra_ratio_above_borderline(grid256, rng):
    # s = 3/4 sits strictly inside the admissible range but below the
    # calibration index; its own frozen cap must hold
    params = GevreyParams(0.2, 0.75)
    worst = 0.0
    for trial in range(100):
        u = SpectralField(band_limited_coeffs(rng, grid256, 32), grid256)
        v = SpectralField(band_limited_coeffs(rng, grid256, 32), grid256)
        worst = max(worst, algebra_defect(u, v, params))
    assert worst <= constants.ALGEBRA_RATIO_S075
