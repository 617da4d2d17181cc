import numpy as np
import pytest

from prnukit.detect import (corr, correlation_grid, pce, pce_naive,
                            weighted_probe)
from prnukit.errors import ConfigError, DegenerateInputError, DimensionError
from prnukit.fingerprint import Fingerprint
from prnukit.simulate import SyntheticCamera, flat_scene, shoot

TOY_K = np.array([[0.2, 0.2], [-0.2, -0.2]])
TOY_K1 = np.array([[1.0, 1.0], [-1.0, -1.0]])
TOY_K2 = np.array([[-0.1, 0.1], [-0.1, 0.1]])


class TestCorr:
    def test_scaled_copy_has_correlation_one(self):
        assert corr(TOY_K1, TOY_K) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_toy_raster_has_correlation_zero(self):
        assert corr(TOY_K2, TOY_K) == pytest.approx(0.0, abs=1e-12)

    def test_self_correlation_is_one(self):
        x = np.random.default_rng(0).normal(size=(9, 9))
        assert corr(x, x) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("alpha", [2.5, -1.25, 0.01])
    def test_affine_invariance_up_to_sign(self, alpha):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(8, 8))
        y = rng.normal(size=(8, 8))
        assert corr(alpha * x + 3.0, y) == pytest.approx(
            np.sign(alpha) * corr(x, y), abs=1e-12)

    def test_constant_input_rejected(self):
        with pytest.raises(DegenerateInputError):
            corr(np.full((4, 4), 2.0), np.random.default_rng(2).normal(size=(4, 4)))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(DimensionError):
            corr(np.zeros((2, 3)), np.zeros((3, 2)))

    def test_accepts_fingerprint_operands(self):
        fp = Fingerprint(data=TOY_K)
        assert corr(TOY_K1, fp) == pytest.approx(1.0, abs=1e-12)


class TestPce:
    def test_perfect_match(self):
        k = np.random.default_rng(3).normal(size=(32, 32))
        result = pce(k, k)
        assert result.rho_zero == pytest.approx(1.0, abs=1e-9)
        assert result.peak_shift == (0, 0)
        assert result.pce > 500.0
        assert result.decision is True

    def test_negated_match_flips_sign(self):
        k = np.random.default_rng(4).normal(size=(32, 32))
        plus = pce(k, k)
        minus = pce(-k, k)
        assert minus.pce == pytest.approx(-plus.pce, rel=1e-9)
        assert minus.decision is False

    def test_null_pairs_have_small_signed_pce(self):
        values = []
        for trial in range(1000):
            rng = np.random.default_rng((100, trial))
            w = rng.normal(size=(32, 32))
            k = rng.normal(size=(32, 32))
            values.append(pce(w, k).pce)
        assert abs(np.mean(values)) <= 0.5

    def test_unrelated_cameras_never_cross_tau_60(self):
        for trial in range(1000):
            rng = np.random.default_rng((200, trial))
            w = rng.normal(size=(64, 64))
            k = rng.normal(size=(64, 64))
            assert pce(w, k, tau=60.0).decision is False

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_naive_oracle(self, seed):
        rng = np.random.default_rng(seed)
        w = rng.normal(size=(16, 16))
        k = rng.normal(size=(16, 16))
        fast = pce(w, k, omega_radius=2)
        slow = pce_naive(w, k, omega_radius=2)
        assert fast.pce == pytest.approx(slow.pce, rel=1e-6)
        assert fast.rho_zero == pytest.approx(slow.rho_zero, rel=1e-9)
        assert fast.peak_shift == slow.peak_shift

    def test_shifted_copy_peaks_at_the_shift(self):
        k = np.random.default_rng(6).normal(size=(32, 32))
        w = np.roll(k, (-3, -5), axis=(0, 1))
        assert pce(w, k, omega_radius=2).peak_shift == (3, 5)
        assert pce_naive(w, k, omega_radius=2).peak_shift == (3, 5)

    def test_zero_omega_radius_with_matched_pair(self):
        k = np.random.default_rng(7).normal(size=(16, 16))
        result = pce(k, k, omega_radius=0)
        assert np.isfinite(result.pce) and result.pce > 0.0

    def test_omega_covering_all_shifts_rejected(self):
        with pytest.raises(ConfigError):
            pce(np.random.default_rng(8).normal(size=(4, 4)),
                np.random.default_rng(9).normal(size=(4, 4)), omega_radius=2)

    @pytest.mark.parametrize("scale", [0.001, 7.0])
    def test_invariant_to_positive_scaling(self, scale):
        rng = np.random.default_rng(10)
        w = rng.normal(size=(24, 24))
        k = rng.normal(size=(24, 24))
        base = pce(w, k).pce
        assert pce(scale * w, k).pce == pytest.approx(base, rel=1e-9)
        assert pce(w, scale * k).pce == pytest.approx(base, rel=1e-9)

    def test_correlation_grid_bounded(self):
        rng = np.random.default_rng(11)
        grid = correlation_grid(rng.normal(size=(20, 20)), rng.normal(size=(20, 20)))
        assert np.abs(grid).max() <= 1.0 + 1e-9

    def test_omega_in_denominator_variant(self):
        k = np.random.default_rng(12).normal(size=(32, 32))
        default = pce(k, k, omega_radius=3)
        variant = pce(k, k, omega_radius=3, omega_in_denominator=True)
        # the peak sits inside omega, so including omega inflates the energy
        assert variant.pce < default.pce

    def test_degenerate_inputs_rejected(self):
        with pytest.raises(DegenerateInputError):
            pce(np.ones((8, 8)), np.random.default_rng(13).normal(size=(8, 8)))


class TestWeightedProbe:
    def test_elementwise_product(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        b = np.array([[2.0, 0.5], [1.0, 10.0]])
        assert np.array_equal(weighted_probe(a, b), a * b)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(DimensionError):
            weighted_probe(np.zeros((2, 2)), np.zeros((2, 3)))

    def test_constant_probe_leaves_pce_unchanged(self):
        rng = np.random.default_rng(14)
        w = rng.normal(size=(32, 32))
        k = rng.normal(size=(32, 32))
        weighted = weighted_probe(k, np.full((32, 32), 150.0))
        assert pce(w, weighted).pce == pytest.approx(pce(w, k).pce, rel=1e-9)

    def test_zero_probe_degenerates_downstream(self):
        rng = np.random.default_rng(15)
        w = rng.normal(size=(16, 16))
        k = rng.normal(size=(16, 16))
        with pytest.raises(DegenerateInputError):
            pce(w, weighted_probe(k, np.zeros((16, 16))))

    def test_bright_scenes_score_at_least_as_well_as_dark_on_average(self):
        from prnukit.fingerprint import extract_residual
        bright_scores, dark_scores = [], []
        for trial in range(8):
            field = np.random.default_rng((300, trial)).normal(0.0, 0.02, (64, 64))
            cam = SyntheticCamera(prnu_true=field, sigma_k=0.02,
                                  read_noise_sigma=2.0, seed=trial)
            for scores, level in ((bright_scores, 200.0), (dark_scores, 30.0)):
                scene = flat_scene(64, 64, level)
                probe = shoot(cam, scene, shot_index=int(level))
                residual = extract_residual(probe)
                operand = weighted_probe(field, probe)
                scores.append(pce(residual, operand).pce)
        assert np.mean(bright_scores) >= np.mean(dark_scores)
