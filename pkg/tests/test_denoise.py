import numpy as np
import pytest

from prnukit.denoise import (DenoiserConfig, denoise, get_denoiser,
                             register_denoiser, shrinkage_gain)
from prnukit.errors import ConfigError, DimensionError
from prnukit.wavelet import SubbandPyramid, wavelet_forward, wavelet_inverse


def test_constant_plane_passes_through():
    out = denoise(np.full((64, 64), 128.0))
    assert np.abs(out - 128.0).max() <= 1e-9


def test_reduces_noise_variance_monte_carlo():
    # constant + AWGN(sigma=2): the filter should strip most of the noise
    in_var, out_var = [], []
    for trial in range(100):
        rng = np.random.default_rng(trial)
        img = 128.0 + rng.normal(0.0, 2.0, (32, 32))
        out = denoise(img)
        in_var.append(img.var())
        out_var.append(out.var())
    assert np.mean(out_var) < np.mean(in_var)


def test_huge_sigma_keeps_only_the_approximation():
    rng = np.random.default_rng(3)
    img = rng.uniform(0.0, 255.0, (64, 64))
    out = denoise(img, DenoiserConfig(sigma=1e9))

    pyramid = wavelet_forward(img, 4)
    zeroed = [tuple(np.zeros_like(s) for s in level) for level in pyramid.details]
    approx_only = wavelet_inverse(
        SubbandPyramid(pyramid.approx, zeroed, pyramid.image_shape))
    assert np.abs(out - approx_only).max() <= 1e-6


def test_deterministic():
    img = np.random.default_rng(5).uniform(0.0, 255.0, (48, 48))
    assert np.array_equal(denoise(img), denoise(img))


def test_shape_preserved_including_padding_path():
    for shape in [(64, 64), (50, 70), (8, 8)]:
        img = np.random.default_rng(0).uniform(0.0, 255.0, shape)
        assert denoise(img).shape == shape


def test_shrinkage_gain_bounded_and_monotone_in_sigma():
    mean_squares = np.logspace(-3, 4, 40)
    sigmas = [0.5, 1.0, 2.0, 3.0, 8.0]
    previous = None
    for sigma in sigmas:
        gain = shrinkage_gain(mean_squares, sigma)
        assert np.all(gain >= 0.0) and np.all(gain < 1.0)
        if previous is not None:
            assert np.all(gain <= previous + 1e-15)
        previous = gain


def test_degenerate_input_rejected():
    with pytest.raises(DimensionError):
        denoise(np.zeros((1, 5)))


@pytest.mark.parametrize("kwargs", [
    {"sigma": 0.0}, {"sigma": -1.0}, {"levels": 0},
    {"window_sizes": (4,)}, {"window_sizes": (1,)}, {"window_sizes": ()},
])
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        DenoiserConfig(**kwargs)


def test_registry_lookup():
    assert get_denoiser("dwt") is denoise
    with pytest.raises(ConfigError):
        get_denoiser("bm3d")


def test_registry_accepts_alternatives():
    register_denoiser("_test_identity", lambda img, cfg: img)
    try:
        fn = get_denoiser("_test_identity")
        img = np.ones((4, 4))
        assert fn(img, DenoiserConfig()) is img
    finally:
        from prnukit.denoise import _REGISTRY
        _REGISTRY.pop("_test_identity")
