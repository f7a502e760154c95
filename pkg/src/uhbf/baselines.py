"""Comparator analog front ends evaluated at equal injected power.

Two fully-connected phase-shifter architectures are modeled through their
physical splitter/phase-shifter/combiner transfer, which is contractive even
with ideal passive components:

* FC1: one phase shifter per chain-antenna link and two chains per stream.
  Each target entry c is written as A e^{j a} + A e^{j b} (exact whenever
  |c| <= 2A), and the physical transfer scales the unit-modulus matrix by
  1/sqrt(N r), so part of the injected power never reaches the antennas.
* FC2: two phase shifters per link, physical bound 1/sqrt(N r) per entry.
  The analog stage is the largest columnwise-scaled copy of the target's
  orthonormal basis that stays inside that bound.

The third baseline keeps lossless transport but no programmability: it picks
the best subset of fixed DFT (Butler) beams for the current target, which is
optimal among subsets because the beam scores are additive over an
orthonormal basis.  All baselines share the MMSE digital stage, recomputed
over their own effective channel and scaled to the common power budget.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import dft_mixer, rf_efficiency
from .precoding import PrecoderPair, mmse_bb

FC1_KIND = "fc1"
FC2_KIND = "fc2"
BUTLER_KIND = "butler"


@dataclass(frozen=True)
class BaselineResult:
    """Analog stage of one comparator; efficiency is filled after the digital stage."""

    kind: str
    analog: np.ndarray
    chains: int
    efficiency: float | None = None
    beam_set: tuple[int, ...] | None = None


def two_phase_decompose(value: complex, amplitude: float) -> tuple[float, float]:
    """Split ``value`` into two equal-amplitude phasors: A e^{ja} + A e^{jb} = value."""
    if amplitude <= 0.0:
        raise ValueError("amplitude must be positive")
    ratio = abs(value) / (2.0 * amplitude)
    if ratio > 1.0 + 1e-9:
        raise ValueError(f"|value| = {abs(value):.3e} exceeds the reachable 2A = {2 * amplitude:.3e}")
    spread = float(np.arccos(min(ratio, 1.0)))
    base = float(np.angle(value))
    return base + spread, base - spread


def fc1_analog(f_tar: np.ndarray) -> BaselineResult:
    """One-phase-shifter fully-connected stage in its exact-representation regime.

    Uses two chains per target column with per-column amplitude
    A = max_n |t_n| / 2, the smallest amplitude that keeps every entry
    reachable; the physical transfer has constant entry modulus
    1/sqrt(2 N S).
    """
    f_tar = np.asarray(f_tar, dtype=complex)
    n, n_streams = f_tar.shape
    chains = 2 * n_streams
    abstract = np.empty((n, chains), dtype=complex)
    for s in range(n_streams):
        column = f_tar[:, s]
        peak = np.abs(column).max()
        if peak == 0.0:
            raise ValueError(f"target column {s} is zero")
        amplitude = peak / 2.0
        for row in range(n):
            plus, minus = two_phase_decompose(column[row], amplitude)
            abstract[row, 2 * s] = np.exp(1j * plus)
            abstract[row, 2 * s + 1] = np.exp(1j * minus)
    physical = abstract / np.sqrt(n * chains)
    return BaselineResult(FC1_KIND, physical, chains)


def fc1_abstract_reconstruction(f_tar: np.ndarray, result: BaselineResult) -> np.ndarray:
    """Rebuild the target from the abstract factorization (identity check)."""
    f_tar = np.asarray(f_tar, dtype=complex)
    n, n_streams = f_tar.shape
    abstract = result.analog * np.sqrt(n * result.chains)
    weights = np.zeros((result.chains, n_streams), dtype=complex)
    for s in range(n_streams):
        amplitude = np.abs(f_tar[:, s]).max() / 2.0
        weights[2 * s, s] = amplitude
        weights[2 * s + 1, s] = amplitude
    return abstract @ weights


def fc2_analog(f_tar: np.ndarray) -> BaselineResult:
    """Two-phase-shifter fully-connected stage: largest passive column scaling.

    The orthonormal basis of the target is scaled per column by
    d_j = 1 / (sqrt(N r) max_i |U_ij|), which meets the passive entry bound
    1/sqrt(N r) with equality at each column's peak row.
    """
    f_tar = np.asarray(f_tar, dtype=complex)
    n, chains = f_tar.shape
    u, svals, _ = np.linalg.svd(f_tar, full_matrices=False)
    if svals[0] == 0.0 or svals[-1] <= 1e-14 * svals[0]:
        raise ValueError("target matrix is rank deficient")
    scales = 1.0 / (np.sqrt(n * chains) * np.abs(u).max(axis=0))
    return BaselineResult(FC2_KIND, u * scales[None, :], chains)


def butler_select(f_tar: np.ndarray, n_beams: int) -> BaselineResult:
    """Pick the fixed DFT beams with the largest target overlap.

    Scores c_n = ||F_tar^H u_n||^2 are additive over the orthonormal beams, so
    the greedy top-n_beams set maximizes the total overlap among all subsets.
    Ties resolve to the lowest beam index.
    """
    f_tar = np.asarray(f_tar, dtype=complex)
    n = f_tar.shape[0]
    if not 1 <= n_beams <= n:
        raise ValueError("need 1 <= n_beams <= n_antennas")
    basis = dft_mixer(n)
    scores = np.sum(np.abs(f_tar.conj().T @ basis) ** 2, axis=0)
    ranked = np.argsort(-scores, kind="stable")
    selected = tuple(sorted(int(b) for b in ranked[:n_beams]))
    return BaselineResult(BUTLER_KIND, basis[:, selected], n_beams, beam_set=selected)


def evaluate_baseline(
    kind: str,
    h: np.ndarray,
    f_tar: np.ndarray,
    noise_w: float,
    power_w: float,
    n_beams: int | None = None,
) -> tuple[PrecoderPair, BaselineResult]:
    """Build one comparator's analog stage and recompute its digital stage.

    The digital matrix is the MMSE solution over the baseline's own effective
    channel H^H F_RF, scaled to the shared injected-power budget.
    """
    if kind == FC1_KIND:
        result = fc1_analog(f_tar)
    elif kind == FC2_KIND:
        result = fc2_analog(f_tar)
    elif kind == BUTLER_KIND:
        result = butler_select(f_tar, f_tar.shape[1] if n_beams is None else n_beams)
    else:
        raise ValueError(f"unknown baseline kind {kind!r}")

    h = np.asarray(h, dtype=complex)
    digital = mmse_bb(h.conj().T @ result.analog, noise_w, power_w)
    pair = PrecoderPair(result.analog, digital, power_w)
    efficiency = rf_efficiency(result.analog, digital)
    return pair, BaselineResult(result.kind, result.analog, result.chains, efficiency, result.beam_set)
