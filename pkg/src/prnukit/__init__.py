"""Sensor-noise camera fingerprinting toolkit.

Extract noise residuals from images, aggregate them into camera fingerprints,
store fingerprints as compact 8-bit PNGs, and decide image-camera matches by
normalized correlation and peak-to-correlation energy.  A seeded synthetic
sensor provides ground truth for end-to-end evaluation, and correlation-based
loss kernels with verified gradients support external trainers.
"""

from .denoise import (DenoiserConfig, available_denoisers, denoise,
                      get_denoiser, register_denoiser, shrinkage_gain)
from .detect import (PceResult, corr, correlation_grid, pce, pce_naive,
                     weighted_probe)
from .errors import (ConfigError, DegenerateInputError, DimensionError,
                     FormatError, InputError, PrnuKitError)
from .fingerprint import (Fingerprint, estimate_fingerprint, extract_residual,
                          postprocess, wiener_freq, zero_mean)
from .image_io import center_crop, load_image, read_residual, write_residual
from .loss import LossEval, mse_loss, rho_grad_uncentered, rho_loss
from .quantize import (DEFAULT_SCALE, QuantizedFingerprint, dequantize,
                       load_png, quantize, save_png, search_scale)
from .roc import RocSummary, roc_summary
from .simulate import (SyntheticCamera, flat_scene, jpeg_cycle, make_camera,
                       shoot, textured_scene)
from .wavelet import SubbandPyramid, wavelet_forward, wavelet_inverse

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DegenerateInputError", "DenoiserConfig", "DimensionError",
    "DEFAULT_SCALE", "Fingerprint", "FormatError", "InputError", "LossEval",
    "PceResult", "PrnuKitError", "QuantizedFingerprint", "RocSummary",
    "SubbandPyramid", "SyntheticCamera", "available_denoisers", "center_crop",
    "corr", "correlation_grid", "denoise", "dequantize", "estimate_fingerprint",
    "extract_residual", "flat_scene", "get_denoiser", "jpeg_cycle",
    "load_image", "load_png", "make_camera", "mse_loss", "pce", "pce_naive",
    "postprocess", "quantize", "read_residual", "register_denoiser",
    "rho_grad_uncentered", "rho_loss", "roc_summary", "save_png",
    "search_scale", "shoot", "shrinkage_gain", "textured_scene",
    "wavelet_forward", "wavelet_inverse", "weighted_probe", "wiener_freq",
    "write_residual", "zero_mean",
]
