"""Synthetic sensor with a multiplicative noise pattern, for ground-truth tests.

A camera is a fixed per-pixel gain field K drawn i.i.d. Gaussian; shooting a
scene I0 produces ``clamp(I0 * (1 + K) + read_noise, 0, 255)``.  Because the
true K is known, the whole identification pipeline can be scored against an
exact oracle.  Everything is seeded and reproducible; per-shot noise derives
from (camera seed, shot index) so parallel rendering cannot reorder results.
"""

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image
from scipy.ndimage import gaussian_filter

from .errors import ConfigError, DimensionError


@dataclass
class SyntheticCamera:
    prnu_true: np.ndarray
    sigma_k: float
    read_noise_sigma: float
    seed: int

    @property
    def width(self):
        return self.prnu_true.shape[1]

    @property
    def height(self):
        return self.prnu_true.shape[0]


def make_camera(width, height, sigma_k=0.02, read_noise_sigma=2.0, seed=0):
    """Create a camera with an i.i.d. Gaussian(0, sigma_k^2) gain field."""
    if not 0.0 < sigma_k <= 0.1:
        raise ConfigError(f"sigma_k must be in (0, 0.1], got {sigma_k}")
    if read_noise_sigma < 0.0:
        raise ConfigError(f"read_noise_sigma must be >= 0, got {read_noise_sigma}")
    if width < 64 or height < 64:
        raise ConfigError(f"camera must be at least 64x64, got {width}x{height}")
    rng = np.random.default_rng(seed)
    field = rng.normal(0.0, sigma_k, size=(height, width))
    return SyntheticCamera(prnu_true=field, sigma_k=float(sigma_k),
                           read_noise_sigma=float(read_noise_sigma),
                           seed=int(seed))


def shoot(cam, scene, shot_index=0):
    """Render one exposure of ``scene`` through the camera.

    Distinct ``shot_index`` values give independent read noise while staying
    reproducible for a fixed camera.
    """
    scene = np.asarray(scene, dtype=np.float64)
    if scene.shape != cam.prnu_true.shape:
        raise DimensionError(
            f"scene {scene.shape} does not match sensor {cam.prnu_true.shape}")
    if scene.min() < 0.0 or scene.max() > 255.0:
        raise ValueError("scene intensities must lie in [0, 255]")
    out = scene * (1.0 + cam.prnu_true)
    if cam.read_noise_sigma > 0.0:
        rng = np.random.default_rng((cam.seed, int(shot_index)))
        out = out + rng.normal(0.0, cam.read_noise_sigma, size=scene.shape)
    return np.clip(out, 0.0, 255.0)


def flat_scene(width, height, level=160.0):
    """Uniform scene at the given intensity."""
    if not 0.0 <= level <= 255.0:
        raise ConfigError(f"flat level must be in [0, 255], got {level}")
    return np.full((height, width), float(level))


def textured_scene(width, height, seed, smoothness=6.0, low=40.0, high=220.0):
    """Smooth pseudo-random scene spanning [low, high], reproducible from seed."""
    rng = np.random.default_rng(seed)
    base = gaussian_filter(rng.uniform(0.0, 1.0, size=(height, width)), smoothness)
    span = base.max() - base.min()
    if span == 0.0:
        return np.full((height, width), (low + high) / 2.0)
    base = (base - base.min()) / span
    return low + (high - low) * base


def jpeg_cycle(img, quality=90):
    """Round-trip a raster through 8-bit grayscale JPEG compression."""
    u8 = np.clip(np.round(np.asarray(img, dtype=np.float64)), 0, 255).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(u8, mode="L").save(buf, format="JPEG", quality=int(quality))
    buf.seek(0)
    with Image.open(buf) as decoded:
        return np.asarray(decoded, dtype=np.float64)
