"""Target subspaces, digital beamformers, and the depth guideline.

All architectures are compared at equal injected power: the digital matrix is
always scaled so that ||F_BB||_F^2 equals the power budget, and the power that
actually reaches the antennas is governed by the analog stage alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .network import orthonormality_defect

RANK_DEFICIENCY_RATIO = 1e-14
SEMI_UNITARY_TOLERANCE = 1e-6


class DegenerateChannelError(ValueError):
    """Channel matrix is (numerically) rank deficient; the trial must be resampled."""


@dataclass(frozen=True)
class PrecoderPair:
    """Analog/digital factor pair normalized to the injected-power budget."""

    analog: np.ndarray
    digital: np.ndarray
    injected_power_w: float

    def __post_init__(self) -> None:
        if self.analog.shape[1] != self.digital.shape[0]:
            raise ValueError("analog columns must match digital rows")
        actual = float(np.linalg.norm(self.digital) ** 2)
        if abs(actual - self.injected_power_w) > 1e-10 * max(self.injected_power_w, 1e-300):
            raise ValueError("digital matrix does not meet the injected-power budget")

    @property
    def composite(self) -> np.ndarray:
        return self.analog @ self.digital


def target_subspace(h: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the dominant channel subspace (left singular vectors).

    Raises DegenerateChannelError when the smallest singular value is at
    rounding level relative to the largest, i.e. the channel does not carry
    as many directions as users.
    """
    h = np.asarray(h, dtype=complex)
    u, s, _ = np.linalg.svd(h, full_matrices=False)
    if s[0] == 0.0 or s[-1] <= RANK_DEFICIENCY_RATIO * s[0]:
        raise DegenerateChannelError(f"singular values span {s[0]:.3e} .. {s[-1]:.3e}")
    return u


def closed_form_bb(f_rf: np.ndarray, f_tar: np.ndarray) -> np.ndarray:
    """Least-squares digital stage for a semi-unitary analog stage: F_RF^H F_tar.

    The composite F_RF F_RF^H F_tar is the projection of the target onto the
    realizable analog subspace; containment gives exact recovery at equal
    injected power.
    """
    defect = orthonormality_defect(f_rf)
    if defect > SEMI_UNITARY_TOLERANCE:
        raise ValueError(f"analog stage is not semi-unitary (defect {defect:.3e})")
    return f_rf.conj().T @ f_tar


def mmse_bb(
    h_eff: np.ndarray, noise_w: float, power_w: float, alpha: float | None = None
) -> np.ndarray:
    """Regularized-inverse digital precoder over an S x r effective channel.

    Computes H_eff^H (H_eff H_eff^H + alpha I)^{-1} with alpha = S sigma^2 / P
    unless overridden, then scales to ||F_BB||_F^2 = P.
    """
    h_eff = np.asarray(h_eff, dtype=complex)
    if noise_w <= 0.0 or power_w <= 0.0:
        raise ValueError("noise_w and power_w must be positive")
    n_streams = h_eff.shape[0]
    if alpha is None:
        alpha = n_streams * noise_w / power_w
    gram = h_eff @ h_eff.conj().T + alpha * np.eye(n_streams)
    raw = np.linalg.solve(gram, h_eff).conj().T
    norm = np.linalg.norm(raw)
    if norm == 0.0:
        raise ValueError("effective channel is zero; cannot scale the precoder")
    return raw * (math.sqrt(power_w) / norm)


def fully_digital_mmse(
    h: np.ndarray, noise_w: float, power_w: float, alpha: float | None = None
) -> np.ndarray:
    """Unconstrained benchmark precoder computed directly from the channel."""
    return mmse_bb(np.asarray(h, dtype=complex).conj().T, noise_w, power_w, alpha)


def grassmann_dim(n_chains: int, n_antennas: int) -> int:
    """Real dimension of the set of n_chains-dimensional subspaces of C^N."""
    return 2 * n_chains * (n_antennas - n_chains)


def containment_codim(n_streams: int, n_antennas: int, n_chains: int) -> int:
    """Codimension of the subspaces containing a fixed n_streams-dimensional one."""
    return 2 * n_streams * (n_antennas - n_chains)


def depth_guideline(n_antennas: int, n_chains: int, n_streams: int) -> int:
    """Necessary depth from dimension counting: ceil(2 S (N - r) / (N - 1)).

    Each phase layer contributes N - 1 effective controls (one global phase is
    redundant), and containment of an S-dimensional target subspace is a
    codimension-2S(N - r) condition, so fewer layers cannot generically reach
    it.  The bound is necessary, not sufficient.
    """
    if n_antennas < 2:
        raise ValueError("need at least two antennas")
    if not 0 <= n_streams <= n_chains <= n_antennas:
        raise ValueError("need 0 <= n_streams <= n_chains <= n_antennas")
    numerator = containment_codim(n_streams, n_antennas, n_chains)
    return -(-numerator // (n_antennas - 1))
