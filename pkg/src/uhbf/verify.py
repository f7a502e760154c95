"""Self-contained invariant checks behind the ``verify`` CLI subcommand.

These re-run the library's structural guarantees (unitarity, adjoint
correctness, recovery identities, baseline bounds, determinism) on fresh
random instances, so an installed package can be validated without the
development test suite.  Each check returns (name, passed, detail).
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import cli_io
from .baselines import butler_select, fc1_abstract_reconstruction, fc1_analog, fc2_analog
from .channel import ScenarioConfig, sample_scene, user_channel
from .harness import dbm_to_watts, depth_sweep
from .network import (
    NetworkSpec,
    PhaseConfig,
    analog_beamformer,
    apply_processor,
    dft_mixer,
    orthonormality_defect,
)
from .precoding import (
    closed_form_bb,
    containment_codim,
    depth_guideline,
    fully_digital_mmse,
    mmse_bb,
)
from .programming import OptimizerOptions, backward_pass, forward_pass, seed_gradient, subspace_score
from .quantization import QuantizationSpec, quantize_phases, refine_greedy


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_phases(rng, depth, n):
    arr = rng.uniform(0.0, 2.0 * np.pi, size=(depth, n))
    if arr.size:
        arr[:, 0] = 0.0
    return PhaseConfig(arr)


def _random_target(rng, n, s):
    a = rng.standard_normal((n, s)) + 1j * rng.standard_normal((n, s))
    return np.linalg.qr(a)[0][:, :s]


def check_processor_unitarity() -> CheckResult:
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 65))
        spec = NetworkSpec(n, int(rng.integers(1, n + 1)), int(rng.integers(0, 6)))
        x = apply_processor(spec, _random_phases(rng, spec.depth, n), np.eye(n))
        worst = max(worst, orthonormality_defect(x) / np.sqrt(n))
    return CheckResult("processor unitarity", worst <= 1e-10, f"worst defect/sqrt(N) = {worst:.2e}")


def check_power_preservation() -> CheckResult:
    rng = np.random.default_rng(102)
    spec = NetworkSpec(48, 6, 4)
    f_rf = analog_beamformer(spec, _random_phases(rng, 4, 48))
    worst = 0.0
    for _ in range(200):
        x = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        worst = max(worst, abs(np.linalg.norm(f_rf @ x) ** 2 - np.linalg.norm(x) ** 2) / np.linalg.norm(x) ** 2)
    return CheckResult("injected power preservation", worst <= 1e-12, f"worst relative error = {worst:.2e}")


def check_fft_matches_dense() -> CheckResult:
    rng = np.random.default_rng(103)
    worst = 0.0
    for n in (4, 9, 16, 32):
        depth = 3
        spec = NetworkSpec(n, 2, depth)
        phases = _random_phases(rng, depth, n)
        w = dft_mixer(n)
        dense = w.copy()
        for layer in phases.phases:
            dense = w @ (np.diag(np.exp(1j * layer)) @ dense)
        fast = apply_processor(spec, phases, np.eye(n))
        worst = max(worst, np.linalg.norm(fast - dense) / np.linalg.norm(dense))
    return CheckResult("fast mixer equals dense cascade", worst <= 1e-12, f"worst relative error = {worst:.2e}")


def check_adjoint_gradient() -> CheckResult:
    rng = np.random.default_rng(104)
    step, worst = 1e-6, 0.0
    for n, depth in ((8, 1), (8, 2), (16, 2)):
        spec = NetworkSpec(n, 2, depth)
        phases = _random_phases(rng, depth, n)
        f_tar = _random_target(rng, n, 2)
        stack, f_rf = forward_pass(spec, phases)
        grads = backward_pass(spec, phases, seed_gradient(f_tar, f_rf), stack)
        for k in range(depth):
            for idx in range(1, n):
                bumped = np.array(phases.phases)
                bumped[k, idx] += step
                hi = -subspace_score(f_tar, analog_beamformer(spec, bumped))
                bumped[k, idx] -= 2 * step
                lo = -subspace_score(f_tar, analog_beamformer(spec, bumped))
                fd = (hi - lo) / (2 * step)
                if max(abs(fd), abs(grads[k, idx])) > 1e-8:
                    worst = max(worst, abs(grads[k, idx] - fd) / max(abs(fd), abs(grads[k, idx])))
    return CheckResult("adjoint gradient vs finite differences", worst <= 1e-5, f"worst relative error = {worst:.2e}")


def check_quantization_keeps_unitarity() -> CheckResult:
    rng = np.random.default_rng(105)
    spec = NetworkSpec(32, 4, 4)
    phases = _random_phases(rng, 4, 32)
    worst = 0.0
    for bits in (1, 2, 4, 6):
        quantized = quantize_phases(phases, bits)
        step = 2.0 * np.pi / 2**bits
        on_grid = np.abs(quantized.phases - np.rint(quantized.phases / step) * step).max() == 0.0
        if not on_grid:
            return CheckResult("quantization grid closure", False, f"off-grid value at q={bits}")
        worst = max(worst, orthonormality_defect(analog_beamformer(spec, quantized)))
    return CheckResult("quantization keeps semi-unitarity", worst <= 1e-11, f"worst defect = {worst:.2e}")


def check_greedy_refinement() -> CheckResult:
    rng = np.random.default_rng(106)
    spec = NetworkSpec(12, 2, 3)
    qspec = QuantizationSpec(2, sweeps=6)
    f_tar = _random_target(rng, 12, 2)
    start = quantize_phases(_random_phases(rng, 3, 12), 2)
    before = subspace_score(f_tar, analog_beamformer(spec, start))
    refined = refine_greedy(spec, start, f_tar, qspec)
    after = subspace_score(f_tar, analog_beamformer(spec, refined))
    return CheckResult("greedy refinement monotone", after >= before - 1e-12, f"{before:.6f} -> {after:.6f}")


def check_exact_recovery() -> CheckResult:
    rng = np.random.default_rng(107)
    worst = 0.0
    for _ in range(10):
        spec = NetworkSpec(24, 4, 3)
        f_rf = analog_beamformer(spec, _random_phases(rng, 3, 24))
        f_tar = f_rf @ (rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2)))
        f_bb = closed_form_bb(f_rf, f_tar)
        worst = max(worst, np.linalg.norm(f_rf @ f_bb - f_tar))
        worst = max(worst, abs(np.linalg.norm(f_bb) ** 2 - np.linalg.norm(f_tar) ** 2))
    return CheckResult("exact recovery under containment", worst <= 1e-10, f"worst residual = {worst:.2e}")


def check_mmse_equivalence() -> CheckResult:
    rng = np.random.default_rng(108)
    worst = 0.0
    for alpha in (None, 0.37):
        spec = NetworkSpec(32, 4, 4)
        f_rf = analog_beamformer(spec, _random_phases(rng, 4, 32))
        h = f_rf @ (rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3)))
        hybrid = f_rf @ mmse_bb(h.conj().T @ f_rf, 7.96e-16, 1e-3, alpha)
        direct = fully_digital_mmse(h, 7.96e-16, 1e-3, alpha)
        worst = max(worst, np.linalg.norm(hybrid - direct) / np.linalg.norm(direct))
    return CheckResult("hybrid equals fully-digital under containment", worst <= 1e-8, f"worst rel. error = {worst:.2e}")


def check_butler_subset_optimality() -> CheckResult:
    import itertools

    rng = np.random.default_rng(109)
    for _ in range(5):
        f_tar = _random_target(rng, 8, 2)
        greedy = np.linalg.norm(f_tar.conj().T @ butler_select(f_tar, 3).analog) ** 2
        basis = dft_mixer(8)
        best = max(
            np.linalg.norm(f_tar.conj().T @ basis[:, list(sub)]) ** 2
            for sub in itertools.combinations(range(8), 3)
        )
        if greedy < best - 1e-12:
            return CheckResult("beam selection subset optimality", False, f"greedy {greedy:.6f} < best {best:.6f}")
    return CheckResult("beam selection subset optimality", True, "greedy equals exhaustive best on 5 targets")


def check_fully_connected_bounds() -> CheckResult:
    rng = np.random.default_rng(110)
    for _ in range(10):
        f_tar = _random_target(rng, 16, 3)
        rebuilt = fc1_abstract_reconstruction(f_tar, fc1_analog(f_tar))
        if np.linalg.norm(rebuilt - f_tar) > 1e-12:
            return CheckResult("fully-connected physical bounds", False, "FC1 factorization mismatch")
        magnitudes = np.abs(fc2_analog(f_tar).analog)
        bound = 1.0 / np.sqrt(16 * 3)
        if magnitudes.max() > bound * (1 + 1e-12) or not np.allclose(magnitudes.max(axis=0), bound, rtol=1e-12):
            return CheckResult("fully-connected physical bounds", False, "FC2 entry bound violated")
    return CheckResult("fully-connected physical bounds", True, "FC1 identity and FC2 bound hold on 10 targets")


def check_channel_contract() -> CheckResult:
    cfg = ScenarioConfig(n_antennas=16, n_users=2, rng_seed=99)
    same = np.array_equal(sample_scene(cfg, 3).matrix, sample_scene(cfg, 3).matrix)
    scene = sample_scene(ScenarioConfig(n_antennas=8, n_users=1, n_paths=0, rng_seed=1), 0)
    user = scene.users[0]
    los = np.abs(user_channel(ScenarioConfig(n_antennas=8, n_users=1, n_paths=0), user))
    lam = ScenarioConfig().wavelength_m
    magnitude_ok = np.allclose(los, lam / (4 * np.pi * user.rho_m), rtol=1e-12)
    return CheckResult(
        "channel determinism and link budget",
        same and magnitude_ok,
        f"deterministic={same}, LOS magnitude exact={magnitude_ok}",
    )


def check_depth_guideline() -> CheckResult:
    ok = (
        depth_guideline(512, 16, 16) == 32
        and depth_guideline(64, 64, 16) == 0
        and depth_guideline(64, 8, 0) == 0
        and depth_guideline(64, 4, 4) * 63 >= containment_codim(4, 64, 4)
    )
    return CheckResult("depth guideline values", ok, "ceil(2S(N-r)/(N-1)) spot checks")


def check_sweep_determinism() -> CheckResult:
    scenario = ScenarioConfig(n_antennas=8, n_users=2, n_trials=2, rng_seed=4)
    opts = OptimizerOptions(iterations=30, restarts=1, rng_seed=4)
    tables = [
        depth_sweep(scenario, 2, (1, 2), dbm_to_watts(0.0), opts, q_bits=(2,), sweeps=2)
        for _ in range(2)
    ]
    buffers = []
    for table in tables:
        buf = io.StringIO()
        cli_io.write_sweep_csv(buf, table)
        buffers.append(buf.getvalue())
    ok = buffers[0] == buffers[1] and tables[0] == tables[1]
    return CheckResult("sweep determinism", ok, "identical tables and CSV bytes across reruns")


ALL_CHECKS = (
    check_processor_unitarity,
    check_power_preservation,
    check_fft_matches_dense,
    check_adjoint_gradient,
    check_quantization_keeps_unitarity,
    check_greedy_refinement,
    check_exact_recovery,
    check_mmse_equivalence,
    check_butler_subset_optimality,
    check_fully_connected_bounds,
    check_channel_contract,
    check_depth_guideline,
    check_sweep_determinism,
)


def run_all() -> list[CheckResult]:
    return [check() for check in ALL_CHECKS]
