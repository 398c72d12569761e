"""Gevrey-Sobolev norms and the exponential frequency multiplier.

The weight attached to frequency ``xi`` is

    w(xi) = exp(sigma*|xi|) * (1 + xi^2)^(s/2),

and ``gevrey_norm`` is the l2 norm of the weighted coefficients.  The
multiplier ``apply_lambda`` applies the exponential part alone; fields
pushed through it are written ``U`` in the diagnostics layer.

Noise guard: the weight at the Nyquist frequency amplifies the spectral
round-off floor by ``exp(sigma*xi_max)``.  Operations refuse to apply a
weight when ``sigma*xi_max > log(tol/eps_machine)`` since the amplified
floor would then exceed ``tol`` relative to order-one coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoiseGuardViolation
from .spectral import (
    GridSpec,
    SpatialField,
    SpectralField,
    pad_modes,
    to_spatial,
    to_spectral,
    truncate_modes,
)

__all__ = [
    "NOISE_GUARD_TOL",
    "GevreyParams",
    "noise_guard_limit",
    "ensure_noise_guard",
    "gevrey_norm",
    "apply_lambda",
    "embedding_constant",
    "algebra_defect",
]

NOISE_GUARD_TOL = 1e-6


@dataclass(frozen=True)
class GevreyParams:
    """Analyticity radius ``sigma`` and Sobolev index ``s``."""

    sigma: float
    s: float = 1.0

    def __post_init__(self) -> None:
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        if not math.isfinite(self.s):
            raise ValueError(f"s must be finite, got {self.s}")


def noise_guard_limit(grid: GridSpec, tol: float = NOISE_GUARD_TOL) -> float:
    """Largest sigma the grid supports under the noise guard."""
    eps = float(np.finfo(np.float64).eps)
    return math.log(tol / eps) / grid.xi_max


def ensure_noise_guard(sigma: float, grid: GridSpec, tol: float = NOISE_GUARD_TOL) -> None:
    eps = float(np.finfo(np.float64).eps)
    bound = math.log(tol / eps)
    if sigma * grid.xi_max > bound:
        raise NoiseGuardViolation(
            f"sigma*xi_max = {sigma * grid.xi_max:.3f} exceeds {bound:.3f}; "
            f"the exponential weight would amplify round-off past tol={tol:g} "
            f"(max sigma for this grid: {bound / grid.xi_max:.4f})"
        )


def _weights(params: GevreyParams, grid: GridSpec) -> np.ndarray:
    xi = grid.xi
    return np.exp(params.sigma * np.abs(xi)) * (1.0 + xi**2) ** (params.s / 2.0)


def gevrey_norm(f: SpectralField, params: GevreyParams) -> float:
    """Weighted coefficient norm ``|| w(xi) f_hat ||_l2``."""
    ensure_noise_guard(params.sigma, f.grid)
    return float(np.linalg.norm(_weights(params, f.grid) * f.coeffs))


def apply_lambda(f: SpectralField, sigma: float) -> SpectralField:
    """Exponential multiplier: mode ``k`` is scaled by ``exp(sigma*|xi_k|)``.

    Composition is a semigroup: applying ``sigma1`` then ``sigma2`` equals
    applying ``sigma1 + sigma2``.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma}")
    ensure_noise_guard(sigma, f.grid)
    return f.with_coeffs(f.coeffs * np.exp(sigma * np.abs(f.grid.xi)))


def embedding_constant(source: GevreyParams, target: GevreyParams, grid: GridSpec) -> float:
    """Best constant on the grid for ``||f||_target <= C ||f||_source``.

    Requires ``target.sigma <= source.sigma``, and ``target.s <= source.s``
    when the sigmas are equal; otherwise no bounded embedding exists and a
    ValueError is raised.  The constant is the max over grid frequencies of
    the weight ratio, so the inequality is sharp on single modes.
    """
    if target.sigma > source.sigma:
        raise ValueError(
            f"no embedding: target sigma {target.sigma} exceeds source sigma {source.sigma}"
        )
    if target.sigma == source.sigma and target.s > source.s:
        raise ValueError(
            f"no embedding: equal sigma but target s {target.s} exceeds source s {source.s}"
        )
    xi = np.abs(grid.xi)
    ratio = np.exp((target.sigma - source.sigma) * xi) * (1.0 + xi**2) ** (
        (target.s - source.s) / 2.0
    )
    return float(ratio.max())


def algebra_defect(u: SpectralField, v: SpectralField, params: GevreyParams) -> float:
    """Ratio ``||u*v||_G / (||u||_G ||v||_G)`` for the pointwise product.

    The product is formed with exact dealiasing and truncated back to the
    grid band, so for inputs band-limited to half the grid the ratio uses
    the exact convolution.  Requires ``s > 1/2`` (the algebra property
    fails at and below the borderline index) and nonzero inputs.
    """
    if params.s <= 0.5:
        raise ValueError(f"algebra property requires s > 1/2, got s={params.s}")
    if u.grid is not v.grid and u.grid != v.grid:
        raise ValueError("u and v must share a grid")
    nu = gevrey_norm(u, params)
    nv = gevrey_norm(v, params)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("algebra_defect is undefined for zero input fields")
    g = u.grid
    fine_n = g.fine(max(g.dealias_pad, 1.5)).n_modes
    uf = to_spatial(pad_modes(u, fine_n))
    vf = to_spatial(pad_modes(v, fine_n))
    prod_fine = to_spectral(SpatialField(uf.samples * vf.samples, uf.grid))
    prod = truncate_modes(prod_fine, g.n_modes)
    return gevrey_norm(prod, params) / (nu * nv)
