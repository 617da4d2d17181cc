import numpy as np
import pytest
from PIL import Image

from prnukit.detect import pce
from prnukit.errors import ConfigError, DegenerateInputError, FormatError
from prnukit.fingerprint import Fingerprint, extract_residual
from prnukit.quantize import (DEFAULT_SCALE, QuantizedFingerprint, dequantize,
                              load_png, quantize, save_png, search_scale)
from prnukit.simulate import SyntheticCamera, flat_scene, shoot


def _corr(x, y):
    xc = x - x.mean()
    yc = y - y.mean()
    return (xc * yc).sum() / np.sqrt((xc * xc).sum() * (yc * yc).sum())


class TestQuantize:
    def test_unit_sample_at_default_scale(self):
        q = quantize(np.array([[1.0]]), 32.5)
        assert q.codes[0, 0] == 160          # round(32.0) + 128

    def test_upper_clamp(self):
        assert quantize(np.array([[10.0]]), 32.5).codes[0, 0] == 255

    def test_lower_clamp(self):
        assert quantize(np.array([[-10.0]]), 32.5).codes[0, 0] == 0

    def test_default_scale_is_32_5(self):
        assert DEFAULT_SCALE == 32.5

    def test_half_away_from_zero_rounding(self):
        # a*K - 0.5 = -0.5 at K = 0: rounds to -1, not 0
        assert quantize(np.array([[0.0]]), 32.5).codes[0, 0] == 127

    def test_monotone_in_sample_value(self):
        rng = np.random.default_rng(0)
        samples = np.sort(rng.normal(0.0, 0.05, 4096))
        codes = quantize(samples.reshape(1, -1), 32.5).codes.ravel()
        assert np.all(np.diff(codes.astype(int)) >= 0)

    def test_non_finite_samples_rejected(self):
        with pytest.raises(ValueError):
            quantize(np.array([[np.nan]]), 32.5)

    def test_bad_scale_rejected(self):
        with pytest.raises(ConfigError):
            quantize(np.zeros((2, 2)), 0.0)

    def test_provenance_copied(self):
        fp = Fingerprint(data=np.zeros((2, 2)), camera_id="cam7", num_images=30,
                         extractor_id="dwt", postprocessed=True)
        q = quantize(fp, 32.5)
        assert (q.camera_id, q.num_images, q.extractor_id, q.postprocessed) == \
            ("cam7", 30, "dwt", True)


class TestDequantize:
    def test_bin_center_of_code_128(self):
        q = QuantizedFingerprint(codes=np.array([[128]], dtype=np.uint8), scale_a=32.5)
        assert dequantize(q).data[0, 0] == pytest.approx(0.5 / 32.5, abs=1e-15)

    @pytest.mark.parametrize("a", [7.0, 32.5, 100.0])
    def test_round_trip_bound_inside_clamp_free_range(self, a):
        samples = np.linspace(-127.0 / a, 127.0 / a, 20001).reshape(1, -1)
        recon = dequantize(quantize(samples, a)).data
        assert np.abs(recon - samples).max() <= 0.5 / a + 1e-12

    def test_zero_fingerprint_round_trip(self):
        a = 32.5
        recon = dequantize(quantize(np.zeros((8, 8)), a)).data
        assert np.abs(recon).max() <= 0.5 / a

    def test_postprocessed_flag_preserved(self):
        fp = Fingerprint(data=np.zeros((2, 2)), postprocessed=True)
        assert dequantize(quantize(fp, 32.5)).postprocessed is True


class TestSearchScale:
    def test_weak_fingerprint_reaches_high_fidelity_on_grid(self):
        rng = np.random.default_rng(1)
        fp = rng.normal(0.0, 0.02, (512, 512))
        a, rho = search_scale(fp, range(1, 129))
        assert rho >= 0.99
        recon = dequantize(quantize(fp, a)).data
        assert _corr(fp, recon) == pytest.approx(rho, abs=1e-12)

    def test_singleton_grid(self):
        fp = np.random.default_rng(2).normal(0.0, 0.02, (64, 64))
        a, _ = search_scale(fp, [17])
        assert a == 17

    def test_optimum_scales_inversely_with_strength(self):
        # sigma values chosen so the optimum is interior to the 1..128 grid
        rng = np.random.default_rng(3)
        base = rng.normal(0.0, 1.0, (256, 256))
        grid = range(1, 129)
        a_weak, _ = search_scale(0.5 * base, grid)
        a_strong, _ = search_scale(1.0 * base, grid)
        assert 1 < a_strong < 128 and 1 < a_weak < 128
        assert abs(a_weak - 2 * a_strong) <= 2   # doubling sigma halves the scale

    def test_constant_fingerprint_rejected(self):
        with pytest.raises(DegenerateInputError):
            search_scale(np.full((8, 8), 0.5), range(1, 5))

    def test_empty_grid_rejected(self):
        with pytest.raises(ConfigError):
            search_scale(np.zeros((4, 4)), [])


class TestPngStorage:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(4)
        fp = Fingerprint(data=rng.normal(0.0, 0.03, (32, 48)), camera_id="camX",
                         num_images=25, extractor_id="dwt", postprocessed=True)
        q = quantize(fp, 32.5)
        path = str(tmp_path / "fp.png")
        save_png(q, path)
        loaded = load_png(path)
        assert np.array_equal(loaded.codes, q.codes)
        assert loaded.scale_a == q.scale_a
        assert loaded.camera_id == "camX"
        assert loaded.num_images == 25
        assert loaded.extractor_id == "dwt"
        assert loaded.postprocessed is True

    def test_pixel_layout_matches_codes(self, tmp_path):
        codes = np.arange(6, dtype=np.uint8).reshape(2, 3)
        path = str(tmp_path / "fp.png")
        save_png(QuantizedFingerprint(codes=codes, scale_a=10.0), path)
        with Image.open(path) as img:
            assert np.array_equal(np.asarray(img), codes)

    def test_storage_saving_vs_single_precision(self, tmp_path):
        rng = np.random.default_rng(5)
        fp = rng.normal(0.0, 0.02, (256, 256))
        path = str(tmp_path / "fp.png")
        save_png(quantize(fp, 32.5), path)
        import os
        png_bytes = os.path.getsize(path)
        raw_single_precision = 4 * 256 * 256
        assert 1.0 - png_bytes / raw_single_precision >= 0.75

    def test_missing_sidecar_rejected(self, tmp_path):
        path = str(tmp_path / "fp.png")
        save_png(quantize(np.zeros((4, 4)), 32.5), path)
        import os
        os.remove(path + ".json")
        with pytest.raises(FormatError):
            load_png(path)

    def test_sixteen_bit_png_rejected(self, tmp_path):
        path = str(tmp_path / "fp.png")
        save_png(quantize(np.zeros((4, 4)), 32.5), path)
        Image.fromarray(np.zeros((4, 4), dtype=np.uint16)).save(path)
        with pytest.raises(FormatError):
            load_png(path)

    def test_multi_channel_png_rejected(self, tmp_path):
        path = str(tmp_path / "fp.png")
        save_png(quantize(np.zeros((4, 4)), 32.5), path)
        Image.fromarray(np.zeros((4, 4, 3), dtype=np.uint8), mode="RGB").save(path)
        with pytest.raises(FormatError):
            load_png(path)


def test_pce_with_quantized_fingerprint_stays_within_five_percent():
    # reference fidelity at the searched per-fingerprint scale
    rng = np.random.default_rng(6)
    field = rng.normal(0.0, 0.02, (128, 128))
    cam = SyntheticCamera(prnu_true=field, sigma_k=0.02, read_noise_sigma=2.0, seed=60)
    ratios = []
    for shot in range(5):
        probe = shoot(cam, flat_scene(128, 128, 160.0), shot_index=shot)
        residual = extract_residual(probe)
        a, _ = search_scale(field, range(1, 129))
        recon = dequantize(quantize(field, a)).data
        ratios.append(pce(residual, recon).pce / pce(residual, field).pce)
    assert abs(np.mean(ratios) - 1.0) <= 0.05
