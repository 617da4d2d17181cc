"""Noise residual extraction and camera fingerprint estimation.

A residual is the image minus its denoised version.  Residuals from several
images of one camera are combined into a fingerprint by the intensity-weighted
estimator ``K = sum(W_i * I_i) / sum(I_i**2)`` (pixel-wise).  Reference
fingerprints are cleaned by removing row/column means and by an adaptive
frequency-domain Wiener filter; probe residuals are never post-processed.
"""

import dataclasses
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter

from .denoise import DenoiserConfig, get_denoiser
from .errors import DegenerateInputError, DimensionError


@dataclass
class Fingerprint:
    """Camera fingerprint raster plus provenance metadata."""

    data: np.ndarray
    camera_id: str = ""
    num_images: int = 1
    extractor_id: str = "dwt"
    postprocessed: bool = False

    @property
    def width(self):
        return self.data.shape[1]

    @property
    def height(self):
        return self.data.shape[0]


def extract_residual(img, denoiser="dwt", cfg=None):
    """Image minus its denoised version, as a 2-D float64 raster."""
    img = np.asarray(img, dtype=np.float64)
    fn = get_denoiser(denoiser)
    if cfg is None:
        cfg = DenoiserConfig()
    denoised = fn(img, cfg)
    if denoised.shape != img.shape:
        raise DimensionError(
            f"denoiser {denoiser!r} changed shape {img.shape} -> {denoised.shape}")
    return img - denoised


def estimate_fingerprint(images, residuals, camera_id="", extractor_id="dwt"):
    """Intensity-weighted fingerprint estimate from paired images/residuals.

    Every pixel needs nonzero total intensity energy; an all-black pixel stack
    would leave the estimate undefined there and raises instead of silently
    emitting zeros.
    """
    images = [np.asarray(i, dtype=np.float64) for i in images]
    residuals = [np.asarray(r, dtype=np.float64) for r in residuals]
    if not images or not residuals:
        raise DimensionError("need at least one image/residual pair")
    if len(images) != len(residuals):
        raise DimensionError(
            f"{len(images)} images but {len(residuals)} residuals")
    shape = images[0].shape
    for arr in images + residuals:
        if arr.shape != shape:
            raise DimensionError(f"mixed raster shapes {shape} vs {arr.shape}")

    numer = np.zeros(shape)
    denom = np.zeros(shape)
    for img, res in zip(images, residuals):
        numer += res * img
        denom += img * img
    if np.any(denom == 0.0):
        row, col = np.argwhere(denom == 0.0)[0]
        raise DegenerateInputError(
            f"zero intensity energy at pixel ({row}, {col}); "
            "the estimator is undefined for all-black pixel stacks")
    return Fingerprint(data=numer / denom, camera_id=camera_id,
                       num_images=len(images), extractor_id=extractor_id,
                       postprocessed=False)


def _zero_mean(data):
    out = data - data.mean(axis=1, keepdims=True)
    out -= out.mean(axis=0, keepdims=True)
    return out


def zero_mean(fp):
    """Remove row means, then column means (kills rank-1 linear-pattern bias)."""
    return dataclasses.replace(fp, data=_zero_mean(fp.data))


def _wiener_filter(data):
    spectrum = np.fft.fft2(data)
    power = spectrum.real ** 2 + spectrum.imag ** 2
    local = uniform_filter(power, size=3, mode="wrap")
    noise_floor = power.mean()
    gain = np.divide(noise_floor, local, out=np.ones_like(local), where=local > 0)
    np.clip(gain, 0.0, 1.0, out=gain)
    out = np.fft.ifft2(spectrum * gain)
    scale = max(float(np.abs(data).max()), 1.0)
    if np.abs(out.imag).max() > 1e-9 * scale:
        raise AssertionError("frequency Wiener filter produced a complex result")
    return out.real


def wiener_freq(fp):
    """Attenuate spectral peaks: per-bin gain noise_floor / local_energy in [0, 1].

    The local energy is a 3x3 mean of squared spectrum magnitudes and the
    noise floor is the global mean, so flat (noise-like) spectra pass almost
    unchanged while concentrated periodic components are suppressed.
    """
    return dataclasses.replace(fp, data=_wiener_filter(fp.data))


def postprocess(fp):
    """Standard reference-fingerprint cleanup: zero-mean, then Wiener filter."""
    out = wiener_freq(zero_mean(fp))
    return dataclasses.replace(out, postprocessed=True)
