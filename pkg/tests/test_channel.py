"""ULA geometry and spherical-wave channel generation."""

import math

import numpy as np
import pytest

from uhbf.channel import (
    ChannelRealization,
    PathGeometry,
    ScenarioConfig,
    UserGeometry,
    antenna_positions,
    fraunhofer_distance_m,
    sample_scene,
    spherical_distance,
    user_channel,
)


class TestAntennaPositions:
    def test_two_elements(self):
        assert np.allclose(antenna_positions(2, 0.5), [-0.25, 0.25])

    def test_three_elements(self):
        assert np.allclose(antenna_positions(3, 1.0), [-1.0, 0.0, 1.0])

    @pytest.mark.parametrize("n", [1, 2, 7, 64])
    def test_centered(self, n):
        assert abs(antenna_positions(n, 0.3).mean()) <= 1e-12

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            antenna_positions(0, 0.5)
        with pytest.raises(ValueError):
            antenna_positions(4, 0.0)


class TestSphericalDistance:
    def test_array_center(self):
        assert spherical_distance(123.0, 0.7, 0.0) == 123.0

    def test_broadside(self):
        got = spherical_distance(100.0, math.pi / 2, 3.0)
        assert abs(got - math.sqrt(100.0**2 + 3.0**2)) <= 1e-12

    def test_law_of_cosines_value(self):
        got = spherical_distance(100.0, math.pi / 3, 0.3)
        want = math.sqrt(100.0**2 + 0.3**2 - 2 * 100.0 * 0.3 * math.cos(math.pi / 3))
        assert abs(got - want) <= 1e-12
        assert abs(got - math.sqrt(9970.09)) <= 1e-9

    def test_nonpositive_distance_rejected(self):
        with pytest.raises(ValueError):
            spherical_distance(0.0, 0.1, 0.2)


class TestUserChannel:
    def test_los_only_magnitude(self):
        cfg = ScenarioConfig(n_antennas=16, n_users=1, n_paths=0)
        user = UserGeometry(rho_m=200.0, theta_rad=0.4)
        h = user_channel(cfg, user)
        want = cfg.wavelength_m / (4.0 * math.pi * 200.0)
        assert np.allclose(np.abs(h), want, rtol=1e-12)

    def test_far_field_phase_progression(self):
        cfg = ScenarioConfig(n_antennas=8, n_users=1, n_paths=0)
        lam = cfg.wavelength_m
        theta = 1.1
        user = UserGeometry(rho_m=1e6 * lam, theta_rad=theta)
        h = user_channel(cfg, user)
        increments = np.angle(h[1:] / h[:-1])
        plane_wave = 2.0 * math.pi * cfg.spacing_m * math.cos(theta) / lam
        plane_wave = math.remainder(plane_wave, 2.0 * math.pi)
        assert np.abs(increments - plane_wave).max() <= 1e-3

    def test_nlos_scale(self):
        cfg = ScenarioConfig(n_antennas=4, n_users=1, n_paths=1)
        path = PathGeometry(rho_m=300.0, theta_rad=0.2, phase_rad=0.9)
        with_nlos = user_channel(cfg, UserGeometry(500.0, 0.1, (path,)))
        los_only = user_channel(cfg, UserGeometry(500.0, 0.1))
        diff = with_nlos - los_only
        want = 10 ** (-15 / 20) * cfg.wavelength_m / (4.0 * math.pi * 300.0)
        assert np.allclose(np.abs(diff), want, rtol=1e-12)


class TestSampleScene:
    def test_deterministic_per_trial(self):
        cfg = ScenarioConfig(n_antennas=16, n_users=3, n_trials=10, rng_seed=42)
        a = sample_scene(cfg, 5)
        b = sample_scene(cfg, 5)
        assert np.array_equal(a.matrix, b.matrix)
        assert a.users == b.users

    def test_independent_of_call_order(self):
        cfg = ScenarioConfig(n_antennas=8, n_users=2, rng_seed=3)
        forward = [sample_scene(cfg, t).matrix for t in (0, 1, 2)]
        backward = [sample_scene(cfg, t).matrix for t in (2, 1, 0)]
        for f, b in zip(forward, backward[::-1]):
            assert np.array_equal(f, b)

    def test_trials_differ_and_attempts_differ(self):
        cfg = ScenarioConfig(n_antennas=8, n_users=2, rng_seed=3)
        assert not np.array_equal(sample_scene(cfg, 0).matrix, sample_scene(cfg, 1).matrix)
        assert not np.array_equal(sample_scene(cfg, 0).matrix, sample_scene(cfg, 0, attempt=1).matrix)

    def test_draw_statistics(self):
        cfg = ScenarioConfig(n_antennas=2, n_users=2, n_paths=0, rng_seed=11)
        rhos = np.array([u.rho_m for t in range(5000) for u in sample_scene(cfg, t).users])
        lo, hi = cfg.rho_range_m
        assert rhos.min() >= lo and rhos.max() <= hi
        sigma_mean = (hi - lo) / math.sqrt(12.0) / math.sqrt(len(rhos))
        assert abs(rhos.mean() - (lo + hi) / 2.0) <= 3.0 * sigma_mean

    def test_geometry_within_ranges(self):
        cfg = ScenarioConfig(n_antennas=4, n_users=3, rng_seed=8)
        scene = sample_scene(cfg, 1)
        for user in scene.users:
            assert cfg.rho_range_m[0] <= user.rho_m <= cfg.rho_range_m[1]
            assert cfg.theta_range_rad[0] <= user.theta_rad <= cfg.theta_range_rad[1]
            assert len(user.paths) == cfg.n_paths

    def test_generic_draws_have_full_rank(self):
        cfg = ScenarioConfig(n_antennas=64, n_users=4, rng_seed=77)
        for t in range(100):
            svals = np.linalg.svd(sample_scene(cfg, t).matrix, compute_uv=False)
            assert svals[-1] > 1e-18


class TestScenarioConfig:
    def test_default_spacing_is_half_wavelength(self):
        cfg = ScenarioConfig()
        assert abs(cfg.spacing_m - 0.5 * cfg.wavelength_m) <= 1e-18

    def test_full_scale_array_straddles_fraunhofer(self):
        cfg = ScenarioConfig(n_antennas=512, n_users=16, n_trials=500)
        dist = fraunhofer_distance_m(cfg)
        assert abs(dist - 400.0) <= 10.0
        assert cfg.rho_range_m[0] < dist < cfg.rho_range_m[1]

    def test_invalid_configs_rejected(self):
        with pytest.raises(ValueError):
            ScenarioConfig(noise_w=0.0)
        with pytest.raises(ValueError):
            ScenarioConfig(rho_range_m=(0.0, 100.0))
        with pytest.raises(ValueError):
            ScenarioConfig(spacing_m=-1.0)

    def test_realization_validation(self):
        with pytest.raises(ValueError):
            ChannelRealization(np.full((4, 1), np.nan), (UserGeometry(1.0, 0.0),))
