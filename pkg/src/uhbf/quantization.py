"""q-bit phase quantization and greedy on-grid refinement.

Quantized phases live on the wrapping grid {0, step, ..., (2^q - 1) step} with
step = 2pi / 2^q.  Every quantized diagonal layer is still unitary, so the
analog beamformer stays semi-unitary and quantization costs reachable
subspaces, never RF transfer efficiency.

Refinement is a coordinate search over the grid: entries are visited in
layer-major, index-ascending order (gauge entries excluded) and each visit
evaluates the moves {phi + step, phi - step} (mod 2pi), keeping the incumbent
on ties.  Moves are scored incrementally: with the cascade split around layer
k as  F_tar^H F_RF = C_k D_k B_k,  a single phase change is the rank-1 update

    ||T + (exp(j new) - exp(j old)) c_n b_n^T||_F^2,

an O(S r) evaluation.  Layer factors are rebuilt from scratch at every layer
visit and the tracked score is resynchronized against a full recomputation at
the end of each sweep, which caps floating-point drift.
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
from .programming import ProgrammingResult, RestartPool, subspace_score


@dataclass(frozen=True)
class QuantizationSpec:
    """Phase resolution (bits) and refinement budget (full sweeps)."""

    bits: int
    sweeps: int = 12

    def __post_init__(self) -> None:
        if self.bits < 1:
            raise ValueError("bits must be a positive integer")
        if self.sweeps < 1:
            raise ValueError("sweeps must be a positive integer")

    @property
    def levels(self) -> int:
        return 2**self.bits

    @property
    def step(self) -> float:
        return TWO_PI / self.levels


def quantize_phases(phases: PhaseConfig, bits: int) -> PhaseConfig:
    """Map every phase to the circularly nearest q-bit grid point.

    Exact midpoints round toward the smaller grid value, so the midpoint of
    the wrap-around cell goes to 0.  Gauge entries stay 0 (0 is on the grid).
    """
    if bits < 1:
        raise ValueError("bits must be a positive integer")
    levels = 1 << bits
    step = TWO_PI / levels
    arr = phases.phases
    below = np.clip(np.floor(arr / step).astype(np.int64), 0, levels - 1)
    dist_lo = arr - below * step
    dist_hi = (below + 1) * step - arr
    wraps = below + 1 == levels
    pick_hi = (dist_hi < dist_lo) | ((dist_hi == dist_lo) & wraps)
    grid_index = np.where(pick_hi, (below + 1) % levels, below)
    return PhaseConfig(grid_index * step)


@dataclass
class LayerPartials:
    """Cached split of the overlap around one phase layer.

    tail_overlap:   S x N, target^H times the cascade from this layer's output
                    to the antenna ports.
    layer_input:    N x r, cascade output entering this layer.
    total_overlap:  S x r, current full overlap tail * D * input.
    phases:         length-N working copy of this layer's phases.
    score:          tracked ||total_overlap||_F^2.
    """

    layer: int
    tail_overlap: np.ndarray
    layer_input: np.ndarray
    total_overlap: np.ndarray
    phases: np.ndarray
    score: float

    def _check(self, entry_index: int) -> None:
        n_s, n_cols = self.tail_overlap.shape
        n_rows, n_r = self.layer_input.shape
        if n_cols != n_rows or self.total_overlap.shape != (n_s, n_r) or self.phases.shape != (n_cols,):
            raise ValueError("stale layer partials: inconsistent shapes")
        if not 0 <= entry_index < n_cols:
            raise ValueError(f"entry index {entry_index} out of range")

    def move_coefficient(self, entry_index: int, new_phase: float) -> complex:
        return np.exp(1j * new_phase) - np.exp(1j * self.phases[entry_index])

    def apply_move(self, entry_index: int, new_phase: float, new_score: float) -> None:
        """Commit an accepted move: rank-1 update of the overlap and score."""
        self._check(entry_index)
        coef = self.move_coefficient(entry_index, new_phase)
        self.total_overlap += np.outer(coef * self.tail_overlap[:, entry_index], self.layer_input[entry_index, :])
        self.phases[entry_index] = new_phase
        self.score = new_score


def build_layer_partials(spec: NetworkSpec, phases, f_tar: np.ndarray, layer: int) -> LayerPartials:
    """Assemble the rank-1-update factors for one layer of the cascade."""
    arr = phase_array(spec, phases)
    if not 0 <= layer < spec.depth:
        raise ValueError(f"layer {layer} out of range for depth {spec.depth}")
    f_tar = np.asarray(f_tar, dtype=complex)

    head = np.array(chain_injection(spec))
    for k in range(layer):
        head = mix(np.exp(1j * arr[k])[:, None] * head)

    tail = mix_adjoint(f_tar)
    for k in range(spec.depth - 1, layer, -1):
        tail = mix_adjoint(np.exp(-1j * arr[k])[:, None] * tail)
    tail = tail.conj().T

    total = tail @ (np.exp(1j * arr[layer])[:, None] * head)
    score = float(np.linalg.norm(total) ** 2)
    return LayerPartials(layer, tail, head, total, np.array(arr[layer]), score)


def delta_score(partials: LayerPartials, entry_index: int, new_phase: float) -> float:
    """Score after changing one phase of the layer, via the rank-1 expansion."""
    partials._check(entry_index)
    coef = partials.move_coefficient(entry_index, new_phase)
    tail_col = partials.tail_overlap[:, entry_index]
    input_row = partials.layer_input[entry_index, :]
    cross = np.dot(partials.total_overlap.conj().T @ tail_col, input_row)
    rank1 = float(np.linalg.norm(tail_col) ** 2 * np.linalg.norm(input_row) ** 2)
    return partials.score + 2.0 * float(np.real(coef * cross)) + abs(coef) ** 2 * rank1


def _refine(
    spec: NetworkSpec, quantized: PhaseConfig, f_tar: np.ndarray, qspec: QuantizationSpec
) -> tuple[PhaseConfig, np.ndarray]:
    """Greedy sweeps; returns the refined config and the per-sweep score trace.

    Inner loop is the same rank-1 expansion as delta_score, fused across one
    layer: with cross_n = tr(T^H c_n b_n^T) and the Gram matrices of the tail
    and input factors precomputed, every candidate costs a few scalar ops and
    an accepted move updates all cross terms with one O(N) vector operation.
    """
    step, levels = qspec.step, qspec.levels
    arr = np.array(quantized.phases)
    grid = np.rint(arr / step).astype(np.int64)
    if arr.size and np.abs(arr - grid * step).max() > 1e-9:
        raise ValueError("phases are not on the q-bit grid")
    grid %= levels
    arr = grid * step
    f_tar = np.asarray(f_tar, dtype=complex)
    grid_phasors = [complex(z) for z in np.exp(1j * step * np.arange(levels))]
    # one-step moves all have the same squared coefficient |e^{j(phi+-step)} - e^{j phi}|^2
    move_weight = 2.0 - 2.0 * np.cos(step)
    depth, n = spec.depth, spec.n_antennas

    trace = []
    tracked = subspace_score(f_tar, analog_beamformer(spec, arr))
    for _ in range(qspec.sweeps):
        moved = False
        # Ascending visits leave layers above the current one untouched, so the
        # tail factors computed here stay exact for the whole sweep; the head is
        # advanced with each layer's freshly updated phases.
        tails: list[np.ndarray] = [np.empty(0)] * depth
        if depth:
            adj = mix_adjoint(f_tar)
            tails[depth - 1] = adj
            for k in range(depth - 1, 0, -1):
                adj = mix_adjoint(np.exp(-1j * arr[k])[:, None] * adj)
                tails[k - 1] = adj
        head = np.array(chain_injection(spec))
        for layer in range(depth):
            tail = tails[layer].conj().T
            total = tail @ (np.exp(1j * arr[layer])[:, None] * head)
            score = float(np.linalg.norm(total) ** 2)
            cross = np.einsum("jm,mj->m", total.conj().T @ tail, head)
            tail_gram = tail.conj().T @ tail
            input_gram = head @ head.conj().T
            rank1 = tail_gram.diagonal().real * input_gram.diagonal().real
            layer_grid = grid[layer]
            for entry in range(1, n):
                here = layer_grid[entry]
                phasor = grid_phasors[here]
                cross_here = complex(cross[entry])
                move_term = move_weight * rank1[entry]
                best_score, best_index = score, here
                for delta in (1, -1):
                    candidate = (here + delta) % levels
                    coef = grid_phasors[candidate] - phasor
                    candidate_score = score + 2.0 * (coef * cross_here).real + move_term
                    if candidate_score > best_score:
                        best_score, best_index = candidate_score, candidate
                if best_index != here:
                    coef = grid_phasors[best_index] - phasor
                    cross += coef.conjugate() * tail_gram[entry, :] * input_gram[:, entry]
                    score = best_score
                    layer_grid[entry] = best_index
                    arr[layer, entry] = best_index * step
                    moved = True
            tracked = score
            head = mix(np.exp(1j * arr[layer])[:, None] * head)
        full = subspace_score(f_tar, analog_beamformer(spec, arr))
        assert abs(full - tracked) <= 1e-8 * max(1.0, abs(full)), "incremental score drifted"
        trace.append(full)
        tracked = full
        if not moved:
            # a no-move sweep is a fixed point; further sweeps cannot change it
            break
    return PhaseConfig(arr), np.asarray(trace)


def refine_greedy(
    spec: NetworkSpec, quantized: PhaseConfig, f_tar: np.ndarray, qspec: QuantizationSpec
) -> PhaseConfig:
    """Greedy local discrete search around a quantized phase configuration."""
    refined, _ = _refine(spec, quantized, f_tar, qspec)
    return refined


def program_quantized(
    spec: NetworkSpec, restart_pool: RestartPool, f_tar: np.ndarray, qspec: QuantizationSpec
) -> ProgrammingResult:
    """Quantize and refine every restart candidate; return the best refined one.

    The q-bit winner is chosen by refined score alone, independently of which
    candidate won at continuous resolution.
    """
    if not restart_pool.candidates:
        raise ValueError("restart pool is empty")
    f_tar = np.asarray(f_tar, dtype=complex)
    best: ProgrammingResult | None = None
    for candidate in restart_pool.candidates:
        refined, trace = _refine(spec, quantize_phases(candidate.phases, qspec.bits), f_tar, qspec)
        score = subspace_score(f_tar, analog_beamformer(spec, refined))
        if best is None or score > best.score:
            best = ProgrammingResult(refined, score, trace, candidate.restart_index)
    return best
