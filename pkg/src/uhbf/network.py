"""Interlaced mixer-phase analog front end.

The analog processor is a cascade of a fixed unitary mixing layer and ``M``
programmable diagonal phase layers,

    X = W D_M W D_{M-1} ... W D_1 W,

acting on the N input ports.  Driving the first r inputs and terminating the
rest yields the analog beamformer F_RF = X E_r, which is semi-unitary for
every phase setting, so all power injected by the RF chains reaches the
antenna ports.  The mixer here is the unitary DFT (Butler) transform, applied
as an FFT, so one cascade application costs O(c N log N) for c driven columns.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi


class Mixer(enum.Enum):
    """Supported fixed mixing layers."""

    UNITARY_DFT = "dft"


@dataclass(frozen=True)
class NetworkSpec:
    """Static description of the analog front end.

    n_antennas: number of ports N of the mixing layer (and antennas).
    n_chains:   number of driven inputs r, 1 <= r <= N.
    depth:      number M of programmable phase layers; the cascade always has
                one more mixer than phase layers, so depth 0 is the bare mixer.
    """

    n_antennas: int
    n_chains: int
    depth: int
    mixer: Mixer = Mixer.UNITARY_DFT

    def __post_init__(self) -> None:
        if self.n_antennas < 1:
            raise ValueError("n_antennas must be a positive integer")
        if not 1 <= self.n_chains <= self.n_antennas:
            raise ValueError("need 1 <= n_chains <= n_antennas")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        if not isinstance(self.mixer, Mixer):
            raise ValueError(f"unknown mixer {self.mixer!r}")


@dataclass(frozen=True)
class PhaseConfig:
    """Programmable phase tensor, one row per layer, wrapped to [0, 2pi).

    The first entry of every layer is pinned to zero: a constant offset on a
    layer only multiplies the cascade by a global phase, so that direction is
    redundant and is removed by convention.
    """

    phases: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.phases, dtype=float)
        if arr.ndim != 2:
            raise ValueError("phases must be a (depth, n_antennas) array")
        if arr.size:
            if not np.all(np.isfinite(arr)):
                raise ValueError("phases must be finite")
            if arr.min() < 0.0 or arr.max() >= TWO_PI:
                raise ValueError("phases must lie in [0, 2pi)")
            if np.any(arr[:, 0] != 0.0):
                raise ValueError("first phase of every layer must be 0")
        arr.setflags(write=False)
        object.__setattr__(self, "phases", arr)

    @property
    def depth(self) -> int:
        return self.phases.shape[0]

    @property
    def n_antennas(self) -> int:
        return self.phases.shape[1]

    @classmethod
    def zeros(cls, depth: int, n_antennas: int) -> "PhaseConfig":
        return cls(np.zeros((depth, n_antennas)))

    @classmethod
    def wrapped(cls, raw: np.ndarray) -> "PhaseConfig":
        """Build from arbitrary finite angles: wrap mod 2pi, zero the gauge entries."""
        arr = np.mod(np.asarray(raw, dtype=float), TWO_PI)
        if arr.ndim != 2:
            raise ValueError("phases must be a (depth, n_antennas) array")
        if arr.size:
            arr[:, 0] = 0.0
        return cls(arr)

    @classmethod
    def random(cls, depth: int, n_antennas: int, rng: np.random.Generator) -> "PhaseConfig":
        """I.i.d. uniform [0, 2pi) phases with the gauge entries zeroed."""
        arr = rng.uniform(0.0, TWO_PI, size=(depth, n_antennas))
        if arr.size:
            arr[:, 0] = 0.0
        return cls(arr)


def dft_mixer(n: int) -> np.ndarray:
    """Unitary DFT matrix: entry (k, l) = exp(-2j pi k l / n) / sqrt(n)."""
    if n < 1:
        raise ValueError("mixer dimension must be a positive integer")
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


def mix(u: np.ndarray) -> np.ndarray:
    """Apply the unitary DFT mixer to each column: W @ u via FFT."""
    return np.fft.fft(u, axis=0) / np.sqrt(u.shape[0])


def mix_adjoint(u: np.ndarray) -> np.ndarray:
    """Apply the mixer adjoint to each column: W^H @ u via inverse FFT."""
    return np.fft.ifft(u, axis=0) * np.sqrt(u.shape[0])


def phase_array(spec: NetworkSpec, phases) -> np.ndarray:
    """Validate and return the (depth, n_antennas) phase array for ``spec``."""
    arr = phases.phases if isinstance(phases, PhaseConfig) else np.asarray(phases, dtype=float)
    if arr.shape != (spec.depth, spec.n_antennas):
        raise ValueError(
            f"phase tensor shape {arr.shape} does not match "
            f"(depth, n_antennas) = ({spec.depth}, {spec.n_antennas})"
        )
    return arr


@functools.lru_cache(maxsize=16)
def _injection(n_antennas: int, n_chains: int) -> np.ndarray:
    """First mixer applied to the driven-port embedding: W E_r, cached per size."""
    z0 = mix(np.eye(n_antennas, n_chains, dtype=complex))
    z0.setflags(write=False)
    return z0


def chain_injection(spec: NetworkSpec) -> np.ndarray:
    """The phase-independent head of the cascade, W E_r (read-only, cached)."""
    return _injection(spec.n_antennas, spec.n_chains)


def apply_processor(spec: NetworkSpec, phases, u_in: np.ndarray) -> np.ndarray:
    """Propagate the N x c input ``u_in`` through the full cascade X."""
    u = np.asarray(u_in, dtype=complex)
    if u.ndim != 2 or u.shape[0] != spec.n_antennas:
        raise ValueError(f"input must be ({spec.n_antennas}, c), got {u.shape}")
    arr = phase_array(spec, phases)
    out = mix(u)
    for layer in arr:
        out = mix(np.exp(1j * layer)[:, None] * out)
    return out


def analog_beamformer(spec: NetworkSpec, phases) -> np.ndarray:
    """The N x r analog beamformer: the cascade restricted to the driven ports."""
    arr = phase_array(spec, phases)
    out = np.array(chain_injection(spec))
    for layer in arr:
        out = mix(np.exp(1j * layer)[:, None] * out)
    return out


def rf_efficiency(f_rf: np.ndarray, f_bb: np.ndarray) -> float:
    """Radiated-over-injected power ratio ||F_RF F_BB||_F^2 / ||F_BB||_F^2."""
    injected = float(np.linalg.norm(f_bb) ** 2)
    if injected == 0.0:
        raise ValueError("RF efficiency is undefined for a zero digital matrix")
    radiated = float(np.linalg.norm(f_rf @ f_bb) ** 2)
    return radiated / injected


def orthonormality_defect(a: np.ndarray) -> float:
    """Frobenius distance of A^H A from the identity."""
    gram = a.conj().T @ a
    return float(np.linalg.norm(gram - np.eye(a.shape[1])))
