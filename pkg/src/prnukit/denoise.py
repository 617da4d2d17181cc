"""Wavelet-domain locally adaptive Wiener denoiser.

Detail coefficients are shrunk by ``s2 / (s2 + sigma**2)`` where ``s2`` is a
local estimate of the coefficient's signal energy: the minimum over several
window sizes of the windowed mean of squared coefficients, minus the noise
variance, floored at zero.  The approximation band passes through unchanged.
Denoisers are looked up by string id so alternative residual sources can stand
in for the built-in filter.
"""

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter

from .errors import ConfigError, DimensionError
from .wavelet import SubbandPyramid, wavelet_forward, wavelet_inverse


@dataclass
class DenoiserConfig:
    sigma: float = 2.0
    levels: int = 4
    window_sizes: tuple = (3, 5, 7, 9)

    def __post_init__(self):
        if not self.sigma > 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if self.levels < 1:
            raise ConfigError(f"levels must be >= 1, got {self.levels}")
        self.window_sizes = tuple(int(w) for w in self.window_sizes)
        if not self.window_sizes:
            raise ConfigError("window_sizes must not be empty")
        for w in self.window_sizes:
            if w < 3 or w % 2 == 0:
                raise ConfigError(f"window sizes must be odd and >= 3, got {w}")


def shrinkage_gain(mean_square, sigma):
    """Wiener gain for a coefficient with windowed mean square ``mean_square``.

    The gain is s2/(s2 + sigma^2) with s2 = max(0, mean_square - sigma^2),
    so it always lies in [0, 1) and never increases with sigma.
    """
    s2 = np.maximum(np.asarray(mean_square, dtype=np.float64) - sigma * sigma, 0.0)
    return s2 / (s2 + sigma * sigma)


def denoise(img, cfg=None):
    """Denoise a 2-D intensity raster; returns a raster of the same shape."""
    if cfg is None:
        cfg = DenoiserConfig()
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or min(img.shape) < 2:
        raise DimensionError(f"cannot denoise raster of shape {img.shape}")

    pyramid = wavelet_forward(img, cfg.levels)
    shrunk = []
    for subbands in pyramid.details:
        level_out = []
        for coef in subbands:
            energy = np.full_like(coef, np.inf)
            for w in cfg.window_sizes:
                np.minimum(energy, uniform_filter(coef * coef, size=w, mode="reflect"),
                           out=energy)
            level_out.append(coef * shrinkage_gain(energy, cfg.sigma))
        shrunk.append(tuple(level_out))
    return wavelet_inverse(SubbandPyramid(pyramid.approx, shrunk, pyramid.image_shape))


_REGISTRY = {}


def register_denoiser(name, fn):
    """Register ``fn(img, cfg) -> img`` (shape preserving) under ``name``."""
    _REGISTRY[name] = fn


def get_denoiser(name):
    try:
        return _REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(_REGISTRY))
        raise ConfigError(f"unknown denoiser {name!r} (registered: {known})") from None


def available_denoisers():
    return sorted(_REGISTRY)


register_denoiser("dwt", denoise)
