"""Image loading, cropping, and the raw residual file format.

Images are loaded as 2-D float64 rasters with intensities in [0, 255]; RGB
inputs are reduced to BT.601 luminance.  Noise rasters travel in the "PRNU1"
format: the ASCII magic ``PRNU1\\n``, an ASCII ``"<width> <height>\\n"`` line,
then width*height little-endian IEEE-754 float32 samples in row-major order.
No padding, no checksum; storage is single precision.
"""

import numpy as np
from PIL import Image

from .errors import DimensionError, FormatError

# ITU-R BT.601 luminance weights
_LUMA = np.array([0.299, 0.587, 0.114])

_MAGIC = b"PRNU1\n"


def load_image(path):
    """Load an 8-bit grayscale or RGB image as a luminance raster in [0, 255]."""
    with Image.open(path) as img:
        if img.mode == "L":
            return np.asarray(img, dtype=np.float64)
        if img.mode == "RGB":
            rgb = np.asarray(img, dtype=np.float64)
            return rgb @ _LUMA
        raise FormatError(
            f"{path}: unsupported image mode {img.mode!r} "
            "(expected 8-bit grayscale or RGB)")


def center_crop(img, width, height):
    """Return the centered width x height window of ``img``.

    When the margin is odd the extra row/column is dropped on the
    bottom/right, i.e. the window is biased toward the top-left.
    """
    img = np.asarray(img)
    img_h, img_w = img.shape
    if width > img_w or height > img_h:
        raise DimensionError(
            f"crop {width}x{height} exceeds image {img_w}x{img_h}")
    top = (img_h - height) // 2
    left = (img_w - width) // 2
    return img[top:top + height, left:left + width]


def write_residual(residual, path):
    """Write a 2-D raster to ``path`` in the PRNU1 format (float32 payload)."""
    residual = np.asarray(residual, dtype=np.float64)
    if residual.ndim != 2:
        raise DimensionError(f"expected a 2-D raster, got ndim={residual.ndim}")
    if not np.all(np.isfinite(residual)):
        raise FormatError("residual contains non-finite values")
    height, width = residual.shape
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(f"{width} {height}\n".encode("ascii"))
        fh.write(residual.astype("<f4").tobytes(order="C"))


def read_residual(path):
    """Read a PRNU1 file back as a 2-D float64 raster."""
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}")
        dims_line = b""
        while not dims_line.endswith(b"\n"):
            byte = fh.read(1)
            if not byte:
                raise FormatError(f"{path}: truncated header")
            dims_line += byte
            if len(dims_line) > 32:
                raise FormatError(f"{path}: malformed dimensions line")
        try:
            width, height = (int(tok) for tok in dims_line.split())
        except ValueError as exc:
            raise FormatError(f"{path}: malformed dimensions line") from exc
        if width < 1 or height < 1:
            raise FormatError(f"{path}: invalid dimensions {width}x{height}")
        payload = fh.read()
    expected = 4 * width * height
    if len(payload) != expected:
        raise FormatError(
            f"{path}: payload is {len(payload)} bytes, expected {expected}")
    data = np.frombuffer(payload, dtype="<f4").reshape(height, width)
    if not np.all(np.isfinite(data)):
        raise FormatError(f"{path}: payload contains non-finite values")
    return data.astype(np.float64)
