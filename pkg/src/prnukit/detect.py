"""Correlation detector: normalized cross-correlation and PCE.

The match statistic between a probe residual and a fingerprint is the
peak-to-correlation-energy ratio over all circular 2-D shifts:

    PCE = (m - n_omega) * rho(0,0)**2 / sum(rho_s**2 for s outside omega)

signed by ``sign(rho(0,0))``, where m is the number of shifts (width*height)
and omega is a small square of shifts around (0, 0) excluded from the energy
estimate.  ``pce`` evaluates the shift grid through the FFT; ``pce_naive``
recomputes it with an explicit loop over shifts and exists as an independent
cross-check of the fast path.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateInputError, DimensionError
from .fingerprint import Fingerprint


@dataclass
class PceResult:
    rho_zero: float
    pce: float
    peak_shift: tuple
    decision: bool
    tau: float


def _as_raster(x):
    if isinstance(x, Fingerprint):
        x = x.data
    return np.asarray(x, dtype=np.float64)


def _centered(x, label):
    xc = x - x.mean()
    norm = np.sqrt((xc * xc).sum())
    if norm == 0.0:
        raise DegenerateInputError(f"{label} raster is constant")
    return xc, norm


def corr(x, y):
    """Normalized cross-correlation: mean-centered, norm-normalized dot product."""
    x, y = _as_raster(x), _as_raster(y)
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch {x.shape} vs {y.shape}")
    xc, xn = _centered(x, "first")
    yc, yn = _centered(y, "second")
    return float((xc * yc).sum() / (xn * yn))


def correlation_grid(w, k):
    """rho at every circular shift: grid[dr, dc] correlates ``w`` against ``k``
    advanced by (dr, dc).  Computed in the frequency domain."""
    w, k = _as_raster(w), _as_raster(k)
    if w.shape != k.shape:
        raise DimensionError(f"shape mismatch {w.shape} vs {k.shape}")
    wc, wn = _centered(w, "probe")
    kc, kn = _centered(k, "fingerprint")
    grid = np.fft.ifft2(np.conj(np.fft.fft2(wc)) * np.fft.fft2(kc)).real
    return grid / (wn * kn)


def _omega_mask(shape, omega_radius):
    height, width = shape
    rows = np.minimum(np.arange(height), height - np.arange(height))[:, None]
    cols = np.minimum(np.arange(width), width - np.arange(width))[None, :]
    return (rows <= omega_radius) & (cols <= omega_radius)


def _signed_shift(index, size):
    return index - size if index > size // 2 else index


def _pce_from_grid(grid, tau, omega_radius, omega_in_denominator):
    height, width = grid.shape
    total = height * width
    omega = _omega_mask(grid.shape, omega_radius)
    n_omega = int(omega.sum())
    if n_omega >= total:
        raise ConfigError(
            f"omega_radius {omega_radius} covers all {total} shifts")
    energy = grid[omega] if omega_in_denominator else grid[~omega]
    rho_zero = float(grid[0, 0])
    value = (total - n_omega) * rho_zero ** 2 / float((energy ** 2).sum())
    value *= np.sign(rho_zero) if rho_zero != 0.0 else 0.0
    peak_r, peak_c = np.unravel_index(np.argmax(np.abs(grid)), grid.shape)
    return PceResult(rho_zero=rho_zero,
                     pce=float(value),
                     peak_shift=(_signed_shift(int(peak_r), height),
                                 _signed_shift(int(peak_c), width)),
                     decision=bool(value > tau),
                     tau=float(tau))


def pce(w, k, tau=60.0, omega_radius=5, omega_in_denominator=False):
    """PCE of probe residual ``w`` against fingerprint ``k``.

    ``omega_in_denominator=True`` switches the energy sum to the shifts
    *inside* omega instead of the conventional exclusion; it exists only for
    comparing the two denominator conventions and is not the default detector.
    """
    return _pce_from_grid(correlation_grid(w, k), tau, omega_radius,
                          omega_in_denominator)


def pce_naive(w, k, tau=60.0, omega_radius=5, omega_in_denominator=False):
    """Same contract as :func:`pce`, via an explicit loop over all shifts.

    Quadratic in the pixel count; intended for small rasters (<= 64x64).
    """
    w, k = _as_raster(w), _as_raster(k)
    if w.shape != k.shape:
        raise DimensionError(f"shape mismatch {w.shape} vs {k.shape}")
    wc, wn = _centered(w, "probe")
    kc, kn = _centered(k, "fingerprint")
    height, width = w.shape
    grid = np.empty((height, width))
    for dr in range(height):
        rolled_rows = np.roll(kc, -dr, axis=0)
        for dc in range(width):
            grid[dr, dc] = (wc * np.roll(rolled_rows, -dc, axis=1)).sum()
    grid /= wn * kn
    return _pce_from_grid(grid, tau, omega_radius, omega_in_denominator)


def weighted_probe(raster, intensity):
    """Element-wise product for the intensity-weighted detector variant.

    Multiplying the fingerprint by the probe's intensity before correlation
    matches the estimator weighting: bright pixels carry more of the sensor
    pattern than dark ones.
    """
    raster, intensity = _as_raster(raster), _as_raster(intensity)
    if raster.shape != intensity.shape:
        raise DimensionError(f"shape mismatch {raster.shape} vs {intensity.shape}")
    return raster * intensity
