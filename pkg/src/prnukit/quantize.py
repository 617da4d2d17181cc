"""8-bit fingerprint quantization and PNG persistence.

A fingerprint sample K maps to the byte code
``clamp(round(a*K - 0.5) + 128, 0, 255)`` with round half-away-from-zero;
``a`` is the scale parameter (default 32.5).  Dequantization reads back bin
centers, ``(code - 127.5) / a``, so the reconstruction error is at most
``0.5/a`` per sample while the code stays off the clamp rails.  Quantized
fingerprints are stored as 8-bit single-channel PNGs with a JSON sidecar
carrying the scale and provenance, cutting storage to a quarter of
single-precision floats before PNG compression even starts.
"""

import json
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .errors import ConfigError, DegenerateInputError, FormatError
from .fingerprint import Fingerprint

DEFAULT_SCALE = 32.5

_SIDECAR_KEYS = ("scale_a", "camera_id", "num_images", "extractor_id",
                 "width", "height", "postprocessed")


@dataclass
class QuantizedFingerprint:
    codes: np.ndarray          # uint8, row-major
    scale_a: float
    camera_id: str = ""
    num_images: int = 1
    extractor_id: str = "dwt"
    postprocessed: bool = False

    @property
    def width(self):
        return self.codes.shape[1]

    @property
    def height(self):
        return self.codes.shape[0]


def _as_fingerprint(fp):
    if isinstance(fp, Fingerprint):
        return fp
    return Fingerprint(data=np.asarray(fp, dtype=np.float64))


def _round_half_away(x):
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def quantize(fp, a=DEFAULT_SCALE):
    """Quantize a fingerprint (or bare raster) to 8-bit codes at scale ``a``."""
    fp = _as_fingerprint(fp)
    if not a > 0:
        raise ConfigError(f"scale must be positive, got {a}")
    if not np.all(np.isfinite(fp.data)):
        raise ValueError("fingerprint contains non-finite samples")
    codes = _round_half_away(a * fp.data - 0.5) + 128.0
    codes = np.clip(codes, 0.0, 255.0).astype(np.uint8)
    return QuantizedFingerprint(codes=codes, scale_a=float(a),
                                camera_id=fp.camera_id,
                                num_images=fp.num_images,
                                extractor_id=fp.extractor_id,
                                postprocessed=fp.postprocessed)


def dequantize(q):
    """Reconstruct a float fingerprint from codes (bin-center values)."""
    data = (q.codes.astype(np.float64) - 127.5) / q.scale_a
    return Fingerprint(data=data, camera_id=q.camera_id,
                       num_images=q.num_images, extractor_id=q.extractor_id,
                       postprocessed=q.postprocessed)


def search_scale(fp, grid):
    """Pick the scale maximizing correlation between ``fp`` and its quantized
    round trip.  Ties break toward the smaller scale.  Returns ``(a, rho)``."""
    fp = _as_fingerprint(fp)
    grid = list(grid)
    if not grid:
        raise ConfigError("scale grid must not be empty")
    centered = fp.data - fp.data.mean()
    norm = np.sqrt((centered * centered).sum())
    if norm == 0.0:
        raise DegenerateInputError(
            "constant fingerprint: round-trip correlation is undefined")

    best_a, best_rho = None, -np.inf
    for a in grid:
        recon = dequantize(quantize(fp, a)).data
        rc = recon - recon.mean()
        rc_norm = np.sqrt((rc * rc).sum())
        rho = -np.inf if rc_norm == 0.0 else float((centered * rc).sum() / (norm * rc_norm))
        if rho > best_rho or (rho == best_rho and best_a is not None and a < best_a):
            best_a, best_rho = a, rho
    return best_a, best_rho


def save_png(q, path):
    """Write codes as an 8-bit grayscale PNG plus a ``<path>.json`` sidecar."""
    codes = np.asarray(q.codes)
    if codes.dtype != np.uint8:
        if codes.min() < 0 or codes.max() > 255:
            raise ValueError("codes out of the 8-bit range")
        codes = codes.astype(np.uint8)
    Image.fromarray(codes, mode="L").save(path, format="PNG")
    sidecar = {
        "scale_a": q.scale_a,
        "camera_id": q.camera_id,
        "num_images": int(q.num_images),
        "extractor_id": q.extractor_id,
        "width": int(codes.shape[1]),
        "height": int(codes.shape[0]),
        "postprocessed": bool(q.postprocessed),
    }
    with open(f"{path}.json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_png(path):
    """Load a quantized fingerprint written by :func:`save_png`."""
    try:
        with open(f"{path}.json", "r", encoding="utf-8") as fh:
            sidecar = json.load(fh)
    except FileNotFoundError:
        raise FormatError(f"{path}: missing sidecar {path}.json") from None
    missing = [k for k in _SIDECAR_KEYS if k not in sidecar]
    if missing:
        raise FormatError(f"{path}.json: missing keys {missing}")

    with Image.open(path) as img:
        if img.mode != "L":
            raise FormatError(
                f"{path}: expected an 8-bit single-channel PNG, got mode {img.mode!r}")
        codes = np.asarray(img, dtype=np.uint8)
    if codes.shape != (sidecar["height"], sidecar["width"]):
        raise FormatError(
            f"{path}: PNG is {codes.shape[1]}x{codes.shape[0]} but sidecar says "
            f"{sidecar['width']}x{sidecar['height']}")
    return QuantizedFingerprint(codes=codes,
                                scale_a=float(sidecar["scale_a"]),
                                camera_id=str(sidecar["camera_id"]),
                                num_images=int(sidecar["num_images"]),
                                extractor_id=str(sidecar["extractor_id"]),
                                postprocessed=bool(sidecar["postprocessed"]))
