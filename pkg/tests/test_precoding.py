"""Target extraction, digital stages, and dimension-counting helpers."""

import numpy as np
import pytest

from uhbf.network import NetworkSpec, analog_beamformer, orthonormality_defect
from uhbf.precoding import (
    DegenerateChannelError,
    PrecoderPair,
    closed_form_bb,
    containment_codim,
    depth_guideline,
    fully_digital_mmse,
    grassmann_dim,
    mmse_bb,
    target_subspace,
)

TWO_PI = 2.0 * np.pi
NOISE_W = 7.96e-16


def random_phases(rng, depth, n):
    arr = rng.uniform(0.0, TWO_PI, size=(depth, n))
    arr[:, 0] = 0.0
    return arr


def random_semi_unitary(rng, n, r):
    a = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
    return np.linalg.qr(a)[0][:, :r]


class TestTargetSubspace:
    def test_orthogonal_columns_sorted_by_norm(self):
        h = np.zeros((6, 3), dtype=complex)
        h[0, 0] = 2.0
        h[1, 1] = 1.0
        h[2, 2] = 3.0
        u = target_subspace(h)
        # dominant directions in descending column-norm order, up to phase
        assert abs(abs(u[2, 0]) - 1.0) <= 1e-12
        assert abs(abs(u[0, 1]) - 1.0) <= 1e-12
        assert abs(abs(u[1, 2]) - 1.0) <= 1e-12

    def test_orthonormal_columns(self):
        rng = np.random.default_rng(1)
        h = rng.standard_normal((16, 4)) + 1j * rng.standard_normal((16, 4))
        u = target_subspace(h)
        assert orthonormality_defect(u) <= 1e-12

    def test_projector_reproduces_channel_columns(self):
        rng = np.random.default_rng(2)
        h = rng.standard_normal((12, 3)) + 1j * rng.standard_normal((12, 3))
        u = target_subspace(h)
        residual = h - u @ (u.conj().T @ h)
        for col in range(3):
            assert np.linalg.norm(residual[:, col]) <= 1e-10 * np.linalg.norm(h[:, col])

    def test_rank_deficiency_rejected(self):
        h = np.ones((8, 2), dtype=complex)
        with pytest.raises(DegenerateChannelError):
            target_subspace(h)


class TestClosedFormBb:
    def test_exact_recovery_under_containment(self):
        rng = np.random.default_rng(3)
        spec = NetworkSpec(32, 4, 3)
        f_rf = analog_beamformer(spec, random_phases(rng, 3, 32))
        q = random_semi_unitary(rng, 4, 2)
        f_tar = f_rf @ q
        f_bb = closed_form_bb(f_rf, f_tar)
        assert np.linalg.norm(f_rf @ f_bb - f_tar) <= 1e-11
        assert abs(np.linalg.norm(f_bb) - np.linalg.norm(f_tar)) <= 1e-11

    def test_orthogonal_target_yields_zero(self):
        from uhbf.network import dft_mixer

        w = dft_mixer(8)
        f_rf = w[:, :3]
        f_tar = w[:, 4:6]
        assert np.linalg.norm(closed_form_bb(f_rf, f_tar)) <= 1e-13

    def test_residual_orthogonal_to_analog_range(self):
        rng = np.random.default_rng(4)
        spec = NetworkSpec(16, 3, 2)
        f_rf = analog_beamformer(spec, random_phases(rng, 2, 16))
        f_tar = rng.standard_normal((16, 2)) + 1j * rng.standard_normal((16, 2))
        residual = f_tar - f_rf @ closed_form_bb(f_rf, f_tar)
        assert np.linalg.norm(f_rf.conj().T @ residual) <= 1e-11

    def test_non_semi_unitary_analog_rejected(self):
        with pytest.raises(ValueError):
            closed_form_bb(0.5 * np.eye(8, 2), np.eye(8, 2, dtype=complex))


class TestMmseBb:
    def test_single_user_matched_filter_direction(self):
        rng = np.random.default_rng(5)
        h_eff = rng.standard_normal((1, 4)) + 1j * rng.standard_normal((1, 4))
        f_bb = mmse_bb(h_eff, NOISE_W, 1e-3)
        direction = h_eff.conj().T
        cosine = abs(np.vdot(direction, f_bb)) / (np.linalg.norm(direction) * np.linalg.norm(f_bb))
        assert abs(cosine - 1.0) <= 1e-12

    def test_power_normalization(self):
        rng = np.random.default_rng(6)
        h_eff = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
        for power in (1e-5, 1e-3, 2.0):
            f_bb = mmse_bb(h_eff, NOISE_W, power)
            assert abs(np.linalg.norm(f_bb) ** 2 - power) <= 1e-12 * power

    @pytest.mark.parametrize("alpha", [None, 0.37])
    def test_containment_reproduces_fully_digital(self, alpha):
        rng = np.random.default_rng(7)
        spec = NetworkSpec(32, 4, 4)
        f_rf = analog_beamformer(spec, random_phases(rng, 4, 32))
        mixing = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
        h = f_rf @ mixing
        power = 1e-3

        hybrid = f_rf @ mmse_bb(h.conj().T @ f_rf, NOISE_W, power, alpha)
        direct = fully_digital_mmse(h, NOISE_W, power, alpha)
        assert np.linalg.norm(hybrid - direct) <= 1e-8 * np.linalg.norm(direct)

    def test_zero_channel_rejected(self):
        with pytest.raises(ValueError):
            mmse_bb(np.zeros((2, 4)), NOISE_W, 1e-3)

    def test_invalid_budget_rejected(self):
        with pytest.raises(ValueError):
            mmse_bb(np.ones((1, 2)), NOISE_W, 0.0)


class TestFullyDigitalMmse:
    def test_equals_identity_analog_route(self):
        rng = np.random.default_rng(8)
        h = rng.standard_normal((12, 3)) + 1j * rng.standard_normal((12, 3))
        direct = fully_digital_mmse(h, NOISE_W, 1e-3)
        via_identity = np.eye(12) @ mmse_bb(h.conj().T @ np.eye(12), NOISE_W, 1e-3)
        assert np.allclose(direct, via_identity, atol=1e-14)

    def test_power_normalization(self):
        rng = np.random.default_rng(9)
        h = rng.standard_normal((8, 2)) + 1j * rng.standard_normal((8, 2))
        f_fd = fully_digital_mmse(h, NOISE_W, 5e-3)
        assert abs(np.linalg.norm(f_fd) ** 2 - 5e-3) <= 1e-12 * 5e-3

    def test_zero_forcing_limit(self):
        rng = np.random.default_rng(10)
        h = rng.standard_normal((16, 3)) + 1j * rng.standard_normal((16, 3))
        sigma_min = np.linalg.svd(h, compute_uv=False)[-1]
        f_fd = fully_digital_mmse(h, NOISE_W, 1e-3, alpha=1e-12 * sigma_min**2)
        coupling = h.conj().T @ f_fd
        off_diag = np.abs(coupling - np.diag(np.diag(coupling))).max()
        assert off_diag / np.abs(np.diag(coupling)).min() <= 1e-3


class TestDepthGuideline:
    def test_full_scale_value(self):
        assert depth_guideline(512, 16, 16) == 32

    def test_no_constraint_cases(self):
        assert depth_guideline(64, 64, 16) == 0
        assert depth_guideline(64, 8, 0) == 0

    def test_invalid_ordering_rejected(self):
        with pytest.raises(ValueError):
            depth_guideline(16, 4, 8)
        with pytest.raises(ValueError):
            depth_guideline(16, 32, 4)
        with pytest.raises(ValueError):
            depth_guideline(1, 1, 1)

    @pytest.mark.parametrize("n,r,s", [(64, 4, 4), (512, 16, 16), (32, 8, 3), (100, 10, 7)])
    def test_covers_containment_codimension(self, n, r, s):
        assert depth_guideline(n, r, s) * (n - 1) >= containment_codim(s, n, r)

    def test_dimension_helpers(self):
        assert grassmann_dim(4, 64) == 2 * 4 * 60
        assert containment_codim(4, 64, 4) == 2 * 4 * 60


class TestPrecoderPair:
    def test_projector_idempotent(self):
        rng = np.random.default_rng(11)
        spec = NetworkSpec(24, 4, 3)
        f_rf = analog_beamformer(spec, random_phases(rng, 3, 24))
        projector = f_rf @ f_rf.conj().T
        assert np.linalg.norm(projector @ projector - projector) <= 1e-10

    def test_recovery_property_over_random_instances(self):
        for seed in range(10):
            rng = np.random.default_rng(100 + seed)
            n = int(rng.integers(8, 40))
            r = int(rng.integers(1, min(n, 6) + 1))
            s = int(rng.integers(1, r + 1))
            depth = int(rng.integers(0, 5))
            spec = NetworkSpec(n, r, depth)
            f_rf = analog_beamformer(spec, random_phases(rng, depth, n))
            f_tar = f_rf @ random_semi_unitary(rng, r, s)
            f_bb = closed_form_bb(f_rf, f_tar)
            assert np.linalg.norm(f_rf @ f_bb - f_tar) <= 1e-10
            assert abs(np.linalg.norm(f_bb) ** 2 - np.linalg.norm(f_tar) ** 2) <= 1e-10

    def test_budget_contract_enforced(self):
        rng = np.random.default_rng(12)
        digital = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        power = float(np.linalg.norm(digital) ** 2)
        pair = PrecoderPair(np.eye(4, 2), digital, power)
        assert pair.composite.shape == (4, 2)
        with pytest.raises(ValueError):
            PrecoderPair(np.eye(4, 2), digital, power * 2.0)
