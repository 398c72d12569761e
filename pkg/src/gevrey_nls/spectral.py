"""Fourier collocation layer: grids, transforms, dealiased products.

Conventions, fixed once and used everywhere downstream:

* the spatial domain is ``[-L, L)`` sampled at ``x_j = -L + 2*L*j/n``;
* mode ``k`` (integer, ``-n/2 <= k < n/2``) carries frequency
  ``xi_k = pi*k/L``, stored in numpy FFT order;
* the transform pair is unitary in the sense

      coeffs[k] = (h / sqrt(2L)) * sum_j u(x_j) exp(-i xi_k x_j),
      u(x_j)    = (1 / sqrt(2L)) * sum_k coeffs[k] exp(+i xi_k x_j),

  with ``h = 2L/n``, so ``sum_k |coeffs[k]|^2 = h * sum_j |u_j|^2``
  approximates ``int |u|^2 dx`` and a pure mode ``exp(i xi_1 x)`` has a
  single coefficient of modulus ``sqrt(2L)``.

With this normalization the discrete weighted-l2 norms used by the
Gevrey layer converge to their continuum counterparts as ``L`` and ``n``
grow, which is what makes the frozen oracle values in the test suite
grid-independent up to stated tolerances.

Products are dealiased exactly by zero padding: a degree-``p`` pointwise
product is evaluated on a fine grid with at least ``(p+1)/2`` times as
many modes, so the retained coefficients equal the exact convolution of
the retained input modes, with no aliased images.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "GridSpec",
    "SpatialField",
    "SpectralField",
    "to_spectral",
    "to_spatial",
    "pad_modes",
    "truncate_modes",
    "nonlinearity",
    "free_evolution",
]


def _next_pow2(m: int) -> int:
    return 1 << (max(m, 1) - 1).bit_length()


@dataclass(frozen=True)
class GridSpec:
    """Uniform collocation grid on ``[-half_length, half_length)``.

    ``dealias_pad`` is the minimum zero-padding ratio used for pointwise
    products; it must be at least ``(p+1)/2`` for the largest degree-``p``
    product the grid will be asked to form.  Fine grids are rounded up to
    the next power of two internally, so the actual ratio used is never
    below this value.
    """

    n_modes: int
    half_length: float = 32.0
    dealias_pad: float = 2.0

    def __post_init__(self) -> None:
        n = self.n_modes
        if n < 2 or (n & (n - 1)) != 0:
            raise ValueError(f"n_modes must be a power of two >= 2, got {n}")
        if not self.half_length > 0:
            raise ValueError(f"half_length must be positive, got {self.half_length}")
        if self.dealias_pad < 1.0:
            raise ValueError(f"dealias_pad must be >= 1, got {self.dealias_pad}")

    @cached_property
    def spacing(self) -> float:
        return 2.0 * self.half_length / self.n_modes

    @cached_property
    def x(self) -> np.ndarray:
        j = np.arange(self.n_modes)
        out = -self.half_length + self.spacing * j
        out.setflags(write=False)
        return out

    @cached_property
    def modes(self) -> np.ndarray:
        """Integer mode numbers in FFT order."""
        k = np.fft.fftfreq(self.n_modes, d=1.0 / self.n_modes).astype(int)
        k.setflags(write=False)
        return k

    @cached_property
    def xi(self) -> np.ndarray:
        """Frequencies ``pi*k/half_length`` in FFT order."""
        out = math.pi * self.modes / self.half_length
        out.setflags(write=False)
        return out

    @cached_property
    def xi_max(self) -> float:
        """Largest frequency magnitude on the grid (Nyquist mode)."""
        return math.pi * (self.n_modes // 2) / self.half_length

    @cached_property
    def _alt(self) -> np.ndarray:
        # (-1)^k absorbs the x-offset of -half_length relative to raw FFT indexing
        out = np.where(self.modes % 2 == 0, 1.0, -1.0)
        out.setflags(write=False)
        return out

    def fine(self, min_ratio: float) -> "GridSpec":
        """Grid with the same domain and >= ``min_ratio`` times the modes."""
        n_fine = _next_pow2(math.ceil(self.n_modes * min_ratio))
        return GridSpec(n_fine, self.half_length, self.dealias_pad)


def _as_complex(values, n: int, label: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.shape != (n,):
        raise ValueError(f"{label} must have shape ({n},), got {arr.shape}")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SpatialField:
    """Complex samples on a grid's collocation points."""

    samples: np.ndarray
    grid: GridSpec

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "samples", _as_complex(self.samples, self.grid.n_modes, "samples")
        )

    def l2_norm(self) -> float:
        """Discrete L2 norm, ``sqrt(h * sum |u_j|^2)``."""
        return float(np.sqrt(self.grid.spacing) * np.linalg.norm(self.samples))


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Fourier coefficients in FFT mode order."""

    coeffs: np.ndarray
    grid: GridSpec

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "coeffs", _as_complex(self.coeffs, self.grid.n_modes, "coeffs")
        )

    def l2_norm(self) -> float:
        """l2 norm of the coefficients (equals the spatial L2 norm)."""
        return float(np.linalg.norm(self.coeffs))

    def with_coeffs(self, coeffs: np.ndarray) -> "SpectralField":
        return SpectralField(coeffs, self.grid)


def to_spectral(u: SpatialField) -> SpectralField:
    g = u.grid
    scale = g.spacing / math.sqrt(2.0 * g.half_length)
    coeffs = np.fft.fft(u.samples) * (scale * g._alt)
    return SpectralField(coeffs, g)


def to_spatial(f: SpectralField) -> SpatialField:
    g = f.grid
    scale = g.n_modes / math.sqrt(2.0 * g.half_length)
    samples = np.fft.ifft(f.coeffs * g._alt) * scale
    return SpatialField(samples, g)


def _shift_slot(n_from: int, n_to: int) -> slice:
    # fftshift layout covers modes -n/2 .. n/2-1; the coarse band sits centered
    lo = (n_to - n_from) // 2
    return slice(lo, lo + n_from)


def pad_modes(f: SpectralField, n_modes: int) -> SpectralField:
    """Zero-pad to a finer grid on the same domain; the represented
    trigonometric polynomial is unchanged."""
    n = f.grid.n_modes
    if n_modes < n:
        raise ValueError(f"target n_modes {n_modes} smaller than source {n}")
    if n_modes == n:
        return f
    fine_grid = GridSpec(n_modes, f.grid.half_length, f.grid.dealias_pad)
    out = np.zeros(n_modes, dtype=np.complex128)
    out[_shift_slot(n, n_modes)] = np.fft.fftshift(f.coeffs)
    return SpectralField(np.fft.ifftshift(out), fine_grid)


def truncate_modes(f: SpectralField, n_modes: int) -> SpectralField:
    """Drop modes outside ``[-n_modes/2, n_modes/2)``."""
    n = f.grid.n_modes
    if n_modes > n:
        raise ValueError(f"target n_modes {n_modes} larger than source {n}")
    if n_modes == n:
        return f
    coarse_grid = GridSpec(n_modes, f.grid.half_length, f.grid.dealias_pad)
    kept = np.fft.fftshift(f.coeffs)[_shift_slot(n_modes, n)]
    return SpectralField(np.fft.ifftshift(kept), coarse_grid)


def _validate_power(p: int) -> None:
    if not isinstance(p, (int, np.integer)):
        raise ValueError(f"p must be an integer, got {p!r}")
    if p <= 0 or p % 2 == 0:
        raise ValueError(f"p must be a positive odd integer, got {p}")


def nonlinearity(u: SpatialField, p: int) -> SpatialField:
    """Dealiased pointwise power ``|u|^(p-1) u`` for odd ``p``.

    The retained coefficients equal the exact degree-``p`` convolution of
    the retained input modes (zero padding at ratio ``(p+1)/2`` leaves no
    aliased image inside the kept band).
    """
    _validate_power(p)
    g = u.grid
    needed = (p + 1) / 2.0
    if g.dealias_pad < needed:
        raise ValueError(
            f"dealias_pad {g.dealias_pad} insufficient for p={p}; need >= {needed}"
        )
    f = to_spectral(u)
    fine = pad_modes(f, g.fine(max(g.dealias_pad, needed)).n_modes)
    uf = to_spatial(fine).samples
    wf = np.abs(uf) ** (p - 1) * uf
    w_fine = to_spectral(SpatialField(wf, fine.grid))
    return to_spatial(truncate_modes(w_fine, g.n_modes))


def free_evolution(f: SpectralField, t: float) -> SpectralField:
    """Exact free propagator: multiply mode ``k`` by ``exp(-i xi_k^2 t)``."""
    phase = np.exp(-1j * f.grid.xi**2 * t)
    return f.with_coeffs(f.coeffs * phase)
