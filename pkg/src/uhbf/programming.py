"""Continuous phase programming of the analog beamformer.

The digital stage of the target-matching problem has the closed-form solution
F_BB = F_RF^H F_tar, which reduces the analog design to maximizing the
subspace score ||F_tar^H F_RF(phases)||_F^2.  The score gradient with respect
to every phase is obtained from one forward pass through the cascade plus one
adjoint (backward) pass, at O(M r N log N) per iteration for the DFT mixer:

  forward:   Z_0 = W E_r,  B_k = Z_{k-1},  Z_k = W D_k Z_{k-1},  F_RF = Z_M
  seed:      G = -2 F_tar (F_tar^H F_RF)      (gradient of the negated score)
  backward:  Y_{M+1} = G,  A_k = W^H Y_{k+1},  Y_k = D_k^H A_k
  per layer: grad_k = Im{ ((A_k . conj(B_k)) 1_r) . exp(-j phi_k) }

The first entry of every layer is a gauge direction (global phase) and its
gradient is forced to zero.  Descent runs with Adam on the phase torus from a
small number of independent random restarts; the whole restart pool is kept
because quantized designs are later selected from it independently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import (
    NetworkSpec,
    PhaseConfig,
    TWO_PI,
    analog_beamformer,
    chain_injection,
    mix,
    mix_adjoint,
    phase_array,
)
from .seeding import MASK64


@dataclass(frozen=True)
class OptimizerOptions:
    """Adam hyperparameters and restart budget for phase programming."""

    learning_rate: float = 0.02
    iterations: int = 500
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    restarts: int = 2
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be positive")
        if not (0.0 < self.beta1 < 1.0 and 0.0 < self.beta2 < 1.0):
            raise ValueError("beta1 and beta2 must lie in (0, 1)")
        if self.iterations < 1:
            raise ValueError("iterations must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be positive")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True)
class ProgrammingResult:
    """One programmed phase setting with its score and per-iteration trace."""

    phases: PhaseConfig
    score: float
    score_trace: np.ndarray
    restart_index: int


@dataclass(frozen=True)
class RestartPool:
    """All restart candidates of one programming run, best first on demand."""

    candidates: tuple[ProgrammingResult, ...]

    @property
    def best(self) -> ProgrammingResult:
        return max(self.candidates, key=lambda cand: cand.score)


def subspace_score(f_tar: np.ndarray, f_rf: np.ndarray) -> float:
    """||F_tar^H F_RF||_F^2, the analog matching objective."""
    if f_tar.shape[0] != f_rf.shape[0]:
        raise ValueError(f"row mismatch: {f_tar.shape} vs {f_rf.shape}")
    return float(np.linalg.norm(f_tar.conj().T @ f_rf) ** 2)


def forward_pass(spec: NetworkSpec, phases) -> tuple[list[np.ndarray], np.ndarray]:
    """Run the cascade on the driven ports, keeping every layer input.

    Returns (B_stack, F_RF) where B_stack[k] is the N x r matrix entering
    phase layer k and F_RF is the final analog beamformer.
    """
    arr = phase_array(spec, phases)
    z = chain_injection(spec)
    stack: list[np.ndarray] = []
    for layer in arr:
        stack.append(z)
        z = mix(np.exp(1j * layer)[:, None] * z)
    return stack, z


def seed_gradient(f_tar: np.ndarray, f_rf: np.ndarray) -> np.ndarray:
    """Euclidean gradient of the negated score with respect to F_RF."""
    if f_tar.shape[0] != f_rf.shape[0]:
        raise ValueError(f"row mismatch: {f_tar.shape} vs {f_rf.shape}")
    return -2.0 * (f_tar @ (f_tar.conj().T @ f_rf))


def backward_pass(
    spec: NetworkSpec, phases, seed_grad: np.ndarray, b_stack: list[np.ndarray]
) -> np.ndarray:
    """Adjoint pass producing the (depth, n_antennas) phase gradient.

    ``b_stack`` must come from a forward_pass with the same phases; only shape
    consistency can be checked here.
    """
    arr = phase_array(spec, phases)
    n, r = spec.n_antennas, spec.n_chains
    if seed_grad.shape != (n, r):
        raise ValueError(f"seed gradient must be ({n}, {r}), got {seed_grad.shape}")
    if len(b_stack) != spec.depth or any(b.shape != (n, r) for b in b_stack):
        raise ValueError("stale layer stack: shape mismatch with spec")

    grads = np.zeros((spec.depth, n))
    y = seed_grad
    for k in range(spec.depth - 1, -1, -1):
        a = mix_adjoint(y)
        conj_layer = np.exp(-1j * arr[k])
        grads[k] = np.imag(np.sum(a * b_stack[k].conj(), axis=1) * conj_layer)
        grads[k, 0] = 0.0
        y = conj_layer[:, None] * a
    return grads


@dataclass
class AdamState:
    """Mutable first/second-moment state for one phase tensor."""

    phases: np.ndarray
    first_moment: np.ndarray
    second_moment: np.ndarray
    step: int = 0

    @classmethod
    def start(cls, phases: np.ndarray) -> "AdamState":
        arr = np.array(phases, dtype=float)
        return cls(arr, np.zeros_like(arr), np.zeros_like(arr))


def adam_update(state: AdamState, gradients: np.ndarray, opts: OptimizerOptions) -> AdamState:
    """One bias-corrected Adam step on the phase torus (updates state in place).

    Phases are re-wrapped into [0, 2pi) and gauge entries re-zeroed after the
    step; the moment buffers are left untouched by the wrap, since wrapping
    does not change any diagonal layer.
    """
    if gradients.shape != state.phases.shape:
        raise ValueError("gradient shape does not match optimizer state")
    state.step += 1
    state.first_moment *= opts.beta1
    state.first_moment += (1.0 - opts.beta1) * gradients
    state.second_moment *= opts.beta2
    state.second_moment += (1.0 - opts.beta2) * gradients**2
    m_hat = state.first_moment / (1.0 - opts.beta1**state.step)
    v_hat = state.second_moment / (1.0 - opts.beta2**state.step)
    state.phases -= opts.learning_rate * m_hat / (np.sqrt(v_hat) + opts.epsilon)
    np.mod(state.phases, TWO_PI, out=state.phases)
    if state.phases.size:
        state.phases[:, 0] = 0.0
    return state


def _descend(
    spec: NetworkSpec, f_tar: np.ndarray, opts: OptimizerOptions, restart: int
) -> ProgrammingResult:
    # same recursions as forward_pass/backward_pass, inlined with one shared
    # phasor table per iteration (hot loop of every Monte-Carlo trial)
    rng = np.random.default_rng((opts.rng_seed + restart) & MASK64)
    state = AdamState.start(PhaseConfig.random(spec.depth, spec.n_antennas, rng).phases)
    f_tar_h = f_tar.conj().T
    z0 = chain_injection(spec)
    depth = spec.depth
    stack: list[np.ndarray] = [z0] * depth
    grads = np.empty_like(state.phases)
    trace = np.empty(opts.iterations)
    for it in range(opts.iterations):
        phasors = np.exp(1j * state.phases)
        z = z0
        for k in range(depth):
            stack[k] = z
            z = mix(phasors[k][:, None] * z)
        overlap = f_tar_h @ z
        trace[it] = np.vdot(overlap, overlap).real
        y = -2.0 * (f_tar @ overlap)
        conj_phasors = phasors.conj()
        for k in range(depth - 1, -1, -1):
            a = mix_adjoint(y)
            grads[k] = (np.einsum("ij,ij->i", a, stack[k].conj()) * conj_phasors[k]).imag
            y = conj_phasors[k][:, None] * a
        if grads.size:
            grads[:, 0] = 0.0
        adam_update(state, grads, opts)
    phases = PhaseConfig(state.phases)
    score = subspace_score(f_tar, analog_beamformer(spec, phases))
    bound = float(np.linalg.norm(f_tar) ** 2)
    assert -1e-9 <= score <= bound * (1.0 + 1e-9) + 1e-9, "score outside [0, ||F_tar||^2]"
    trace.setflags(write=False)
    return ProgrammingResult(phases, score, trace, restart)


def program_continuous(
    spec: NetworkSpec, f_tar: np.ndarray, opts: OptimizerOptions
) -> RestartPool:
    """Run ``opts.restarts`` independent Adam descents and keep them all.

    Restart i is seeded with ``opts.rng_seed + i``, so serial and parallel
    execution produce identical pools.  The best candidate is the one with the
    largest final score (lowest restart index on ties).
    """
    f_tar = np.asarray(f_tar, dtype=complex)
    if f_tar.ndim != 2 or f_tar.shape[0] != spec.n_antennas:
        raise ValueError(f"target must be ({spec.n_antennas}, S), got {f_tar.shape}")
    if f_tar.shape[1] > spec.n_chains:
        raise ValueError("number of target columns must not exceed n_chains")
    return RestartPool(tuple(_descend(spec, f_tar, opts, i) for i in range(opts.restarts)))
