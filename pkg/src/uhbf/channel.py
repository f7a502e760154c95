"""Spherical-wave multiuser channel for a centered uniform linear array.

Each user channel is one line-of-sight path plus a configurable number of
NLOS paths.  Per-antenna gains carry both the exact law-of-cosines phase
curvature and the distance-dependent free-space amplitude, so the model spans
the Fresnel and Fraunhofer regions of the array.

Randomness is contracted: every trial draws from its own PCG64 generator
seeded with derive_seed(rng_seed, DOMAIN_CHANNEL, trial_index, attempt), and
the draw order is fixed as, per user: distance, angle, then per path:
distance, angle, phase.  Results therefore never depend on how trials are
scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .seeding import DOMAIN_CHANNEL, derive_seed

SPEED_OF_LIGHT = 299_792_458.0
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ScenarioConfig:
    """Physical scenario and Monte-Carlo bookkeeping.

    Defaults are the desk-scale profile; the noise power is the thermal floor
    over a 200 kHz narrowband slice with no extra receiver noise figure.
    """

    n_antennas: int = 64
    n_users: int = 4
    carrier_hz: float = 100e9
    spacing_m: float | None = None  # None resolves to half a wavelength
    bandwidth_hz: float = 200e3
    noise_w: float = 7.96e-16
    n_paths: int = 4
    nlos_gain_db: float = -15.0
    rho_range_m: tuple[float, float] = (50.0, 1000.0)
    theta_range_rad: tuple[float, float] = (-math.pi / 3, math.pi / 3)
    n_trials: int = 100
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.n_antennas < 1 or self.n_users < 1:
            raise ValueError("n_antennas and n_users must be positive")
        if self.carrier_hz <= 0.0 or self.bandwidth_hz <= 0.0:
            raise ValueError("carrier_hz and bandwidth_hz must be positive")
        if self.noise_w <= 0.0:
            raise ValueError("noise_w must be positive")
        if self.n_paths < 0:
            raise ValueError("n_paths must be non-negative")
        if self.n_trials < 1:
            raise ValueError("n_trials must be positive")
        if self.rho_range_m[0] <= 0.0 or self.rho_range_m[1] < self.rho_range_m[0]:
            raise ValueError("rho_range_m must be a nonempty positive range")
        if self.theta_range_rad[1] < self.theta_range_rad[0]:
            raise ValueError("theta_range_rad must be nonempty")
        if self.spacing_m is None:
            object.__setattr__(self, "spacing_m", 0.5 * self.wavelength_m)
        elif self.spacing_m <= 0.0:
            raise ValueError("spacing_m must be positive")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_hz


@dataclass(frozen=True)
class PathGeometry:
    rho_m: float
    theta_rad: float
    phase_rad: float


@dataclass(frozen=True)
class UserGeometry:
    rho_m: float
    theta_rad: float
    paths: tuple[PathGeometry, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class ChannelRealization:
    """One channel draw: N x S complex gains plus the generating geometry."""

    matrix: np.ndarray
    users: tuple[UserGeometry, ...]

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("channel matrix must be finite")
        if self.matrix.shape[1] != len(self.users):
            raise ValueError("one geometry record per user is required")


def antenna_positions(n_antennas: int, spacing_m: float) -> np.ndarray:
    """Centered ULA coordinates along the array axis, in meters."""
    if n_antennas < 1:
        raise ValueError("n_antennas must be positive")
    if spacing_m <= 0.0:
        raise ValueError("spacing_m must be positive")
    return (np.arange(n_antennas) - (n_antennas - 1) / 2.0) * spacing_m


def spherical_distance(rho_m: float, theta_rad: float, x_m) -> np.ndarray:
    """Exact source-to-antenna distance; the angle is measured from the array axis."""
    if rho_m <= 0.0:
        raise ValueError("rho_m must be positive")
    x = np.asarray(x_m, dtype=float)
    return np.sqrt(rho_m**2 + x**2 - 2.0 * rho_m * x * np.cos(theta_rad))


def fraunhofer_distance_m(cfg: ScenarioConfig) -> float:
    """2 D^2 / lambda for the full aperture D = N d."""
    aperture = cfg.n_antennas * cfg.spacing_m
    return 2.0 * aperture**2 / cfg.wavelength_m


def user_channel(cfg: ScenarioConfig, user: UserGeometry) -> np.ndarray:
    """Per-antenna complex gain of one user: LOS plus attenuated NLOS paths."""
    positions = antenna_positions(cfg.n_antennas, cfg.spacing_m)
    lam = cfg.wavelength_m
    wavenumber = TWO_PI / lam

    def path_gain(rho: float, theta: float) -> np.ndarray:
        dist = spherical_distance(rho, theta, positions)
        return (lam / (4.0 * math.pi * rho)) * np.exp(-1j * wavenumber * dist)

    gains = path_gain(user.rho_m, user.theta_rad)
    nlos_scale = 10.0 ** (cfg.nlos_gain_db / 20.0)
    for path in user.paths:
        gains = gains + nlos_scale * np.exp(1j * path.phase_rad) * path_gain(path.rho_m, path.theta_rad)
    return gains


def sample_scene(cfg: ScenarioConfig, trial_index: int, attempt: int = 0) -> ChannelRealization:
    """Draw all user/path geometries for one trial and assemble the channel."""
    rng = np.random.default_rng(derive_seed(cfg.rng_seed, DOMAIN_CHANNEL, trial_index, attempt))
    users = []
    for _ in range(cfg.n_users):
        rho = rng.uniform(*cfg.rho_range_m)
        theta = rng.uniform(*cfg.theta_range_rad)
        paths = tuple(
            PathGeometry(
                rng.uniform(*cfg.rho_range_m),
                rng.uniform(*cfg.theta_range_rad),
                rng.uniform(0.0, TWO_PI),
            )
            for _ in range(cfg.n_paths)
        )
        users.append(UserGeometry(rho, theta, paths))
    matrix = np.column_stack([user_channel(cfg, user) for user in users])
    return ChannelRealization(matrix, tuple(users))
