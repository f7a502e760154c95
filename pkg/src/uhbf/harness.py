"""End-to-end Monte-Carlo evaluation of all architectures at equal injected power.

Per trial: draw a spherical-wave channel, extract the dominant-subspace
target, program the unitary analog stage (continuous plus quantized variants),
build the comparator analog stages, recompute every digital MMSE stage over
its own effective channel at the shared power budget, and score sum-rates.

Determinism contract: a trial's channel stream is derived from
(scenario.rng_seed, trial index, resample attempt) and its programming stream
from (optimizer.rng_seed, trial index), so any sweep is a pure function of
(config, seed) regardless of scheduling or worker count.
"""

from __future__ import annotations

import functools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .baselines import BUTLER_KIND, FC1_KIND, FC2_KIND, evaluate_baseline
from .channel import ChannelRealization, ScenarioConfig, sample_scene
from .network import NetworkSpec, analog_beamformer, rf_efficiency
from .precoding import DegenerateChannelError, fully_digital_mmse, mmse_bb, target_subspace
from .programming import OptimizerOptions, program_continuous
from .quantization import QuantizationSpec, program_quantized
from .seeding import DOMAIN_PROGRAM, derive_seed

ARCH_FD = "FD"
ARCH_CONTINUOUS = "proposed-continuous"
ARCH_FC1 = "FC1"
ARCH_FC2 = "FC2"
ARCH_BUTLER = "Butler"

DEFAULT_Q_BITS = (2, 4, 6)
MAX_RESAMPLE_ATTEMPTS = 10


def quantized_arch(bits: int) -> str:
    return f"proposed-q{bits}"


def architecture_order(q_bits=DEFAULT_Q_BITS) -> list[str]:
    """Canonical reporting order for CSV rows and tables."""
    return [ARCH_FD, ARCH_CONTINUOUS, *[quantized_arch(q) for q in q_bits], ARCH_FC1, ARCH_FC2, ARCH_BUTLER]


def dbm_to_watts(dbm: float) -> float:
    return 1e-3 * 10.0 ** (dbm / 10.0)


def sinr_per_user(h: np.ndarray, composite: np.ndarray, noise_w: float) -> np.ndarray:
    """Per-user SINR treating residual multiuser interference as noise."""
    h = np.asarray(h, dtype=complex)
    composite = np.asarray(composite, dtype=complex)
    if h.shape != composite.shape:
        raise ValueError(f"channel {h.shape} and composite {composite.shape} must match")
    coupling = np.abs(h.conj().T @ composite) ** 2
    signal = np.diag(coupling)
    interference = coupling.sum(axis=1) - signal
    return signal / (interference + noise_w)


def sum_rate(sinrs: np.ndarray) -> float:
    """Narrowband sum-rate in bits/s/Hz."""
    return float(np.sum(np.log2(1.0 + np.asarray(sinrs))))


@dataclass(frozen=True)
class TrialResult:
    """Per-channel-realization record across all architectures."""

    trial_index: int
    sum_rate_bps_hz: dict[str, float]
    subspace_scores: dict[str, float]
    efficiencies: dict[str, float]
    injected_power_w: dict[str, float]
    wall_time_s: float
    degenerate_resamples: int


@dataclass(frozen=True)
class SweepRow:
    axis: float
    arch: str
    mean_sum_rate: float
    std_err: float
    n_trials: int
    eta_rf_mean: float


@dataclass(frozen=True)
class SweepTable:
    """Aggregated sweep results, one row per (axis point, architecture)."""

    axis_name: str
    rows: tuple[SweepRow, ...]

    def archs(self) -> list[str]:
        seen: list[str] = []
        for row in self.rows:
            if row.arch not in seen:
                seen.append(row.arch)
        return seen

    def series(self, arch: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(axis, mean, std_err) arrays for one architecture, in axis order."""
        picked = [row for row in self.rows if row.arch == arch]
        return (
            np.array([row.axis for row in picked]),
            np.array([row.mean_sum_rate for row in picked]),
            np.array([row.std_err for row in picked]),
        )


def _standard_error(values: np.ndarray) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


def draw_valid_scene(scenario: ScenarioConfig, trial_index: int) -> tuple[ChannelRealization, np.ndarray, int]:
    """Sample a channel, resampling (bounded) on numerically degenerate draws."""
    for attempt in range(MAX_RESAMPLE_ATTEMPTS):
        scene = sample_scene(scenario, trial_index, attempt)
        try:
            return scene, target_subspace(scene.matrix), attempt
        except DegenerateChannelError:
            continue
    raise RuntimeError(f"trial {trial_index}: degenerate channel after {MAX_RESAMPLE_ATTEMPTS} resamples")


@dataclass(frozen=True)
class AnalogDesign:
    """A programmed analog stage plus its target-matching score."""

    beamformer: np.ndarray
    score: float


def design_proposed_stages(
    spec: NetworkSpec,
    f_tar: np.ndarray,
    opts: OptimizerOptions,
    q_bits,
    sweeps: int,
    trial_index: int,
) -> dict[str, AnalogDesign]:
    """Program the continuous stage and its quantized variants for one trial.

    The target does not depend on the power budget, so these designs are
    reused across every swept power point.
    """
    trial_opts = replace(opts, rng_seed=derive_seed(opts.rng_seed, DOMAIN_PROGRAM, trial_index))
    pool = program_continuous(spec, f_tar, trial_opts)
    designs = {ARCH_CONTINUOUS: AnalogDesign(analog_beamformer(spec, pool.best.phases), pool.best.score)}
    for bits in q_bits:
        result = program_quantized(spec, pool, f_tar, QuantizationSpec(bits, sweeps))
        designs[quantized_arch(bits)] = AnalogDesign(analog_beamformer(spec, result.phases), result.score)
    return designs


@dataclass(frozen=True)
class ArchMetrics:
    sum_rate: float
    eta_rf: float
    injected_power_w: float


def _evaluate_semi_unitary(h, f_rf, noise_w, power_w) -> ArchMetrics:
    digital = mmse_bb(h.conj().T @ f_rf, noise_w, power_w)
    eta = rf_efficiency(f_rf, digital)
    assert abs(eta - 1.0) <= 1e-10, "programmed analog stage lost power"
    rate = sum_rate(sinr_per_user(h, f_rf @ digital, noise_w))
    return ArchMetrics(rate, eta, float(np.linalg.norm(digital) ** 2))


def _evaluate_fd(h, noise_w, power_w) -> ArchMetrics:
    f_fd = fully_digital_mmse(h, noise_w, power_w)
    rate = sum_rate(sinr_per_user(h, f_fd, noise_w))
    return ArchMetrics(rate, 1.0, float(np.linalg.norm(f_fd) ** 2))


def _evaluate_baselines(h, f_tar, noise_w, power_w, n_beams) -> dict[str, ArchMetrics]:
    metrics = {}
    for arch, kind in ((ARCH_FC1, FC1_KIND), (ARCH_FC2, FC2_KIND), (ARCH_BUTLER, BUTLER_KIND)):
        pair, result = evaluate_baseline(kind, h, f_tar, noise_w, power_w, n_beams=n_beams)
        rate = sum_rate(sinr_per_user(h, pair.composite, noise_w))
        metrics[arch] = ArchMetrics(rate, result.efficiency, pair.injected_power_w)
    return metrics


def run_trial(
    scenario: ScenarioConfig,
    spec: NetworkSpec,
    opts: OptimizerOptions,
    q_bits,
    power_w: float,
    trial_index: int,
    sweeps: int = 12,
) -> TrialResult:
    """Evaluate every architecture on one deterministic channel realization."""
    if spec.n_antennas != scenario.n_antennas:
        raise ValueError("network and scenario disagree on n_antennas")
    start = time.perf_counter()
    scene, f_tar, resamples = draw_valid_scene(scenario, trial_index)
    h, noise_w = scene.matrix, scenario.noise_w

    designs = design_proposed_stages(spec, f_tar, opts, q_bits, sweeps, trial_index)
    metrics = {ARCH_FD: _evaluate_fd(h, noise_w, power_w)}
    for arch, design in designs.items():
        metrics[arch] = _evaluate_semi_unitary(h, design.beamformer, noise_w, power_w)
    metrics.update(_evaluate_baselines(h, f_tar, noise_w, power_w, spec.n_chains))

    return TrialResult(
        trial_index=trial_index,
        sum_rate_bps_hz={arch: m.sum_rate for arch, m in metrics.items()},
        subspace_scores={arch: design.score for arch, design in designs.items()},
        efficiencies={arch: m.eta_rf for arch, m in metrics.items()},
        injected_power_w={arch: m.injected_power_w for arch, m in metrics.items()},
        wall_time_s=time.perf_counter() - start,
        degenerate_resamples=resamples,
    )


def _depth_trial(trial_index, scenario, n_chains, m_list, power_w, opts, q_bits, sweeps):
    """One trial of the depth sweep: static architectures once, proposed per depth."""
    scene, f_tar, _ = draw_valid_scene(scenario, trial_index)
    h, noise_w = scene.matrix, scenario.noise_w
    static = {ARCH_FD: _evaluate_fd(h, noise_w, power_w)}
    static.update(_evaluate_baselines(h, f_tar, noise_w, power_w, n_chains))

    per_depth: dict[int, dict[str, ArchMetrics]] = {}
    for depth in m_list:
        spec = NetworkSpec(scenario.n_antennas, n_chains, depth)
        designs = design_proposed_stages(spec, f_tar, opts, q_bits, sweeps, trial_index)
        per_depth[depth] = {
            arch: _evaluate_semi_unitary(h, design.beamformer, noise_w, power_w)
            for arch, design in designs.items()
        }
    return static, per_depth


def _power_trial(trial_index, scenario, spec, powers_dbm, opts, q_bits, sweeps):
    """One trial of the power sweep: program once, redo digital stages per point."""
    scene, f_tar, _ = draw_valid_scene(scenario, trial_index)
    h, noise_w = scene.matrix, scenario.noise_w
    designs = design_proposed_stages(spec, f_tar, opts, q_bits, sweeps, trial_index)

    per_power: dict[float, dict[str, ArchMetrics]] = {}
    for dbm in powers_dbm:
        power_w = dbm_to_watts(dbm)
        metrics = {ARCH_FD: _evaluate_fd(h, noise_w, power_w)}
        for arch, design in designs.items():
            metrics[arch] = _evaluate_semi_unitary(h, design.beamformer, noise_w, power_w)
        metrics.update(_evaluate_baselines(h, f_tar, noise_w, power_w, spec.n_chains))
        per_power[dbm] = metrics
    return per_power


def _map_trials(worker, n_trials: int, workers: int) -> list:
    if workers <= 1:
        return [worker(t) for t in range(n_trials)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, range(n_trials), chunksize=1))


def _aggregate(axis_name, axis_values, per_trial, arch_order) -> SweepTable:
    """Reduce per-trial metric dicts into mean / standard-error rows."""
    rows = []
    for axis in axis_values:
        for arch in arch_order:
            rates = np.array([trial[axis][arch].sum_rate for trial in per_trial])
            etas = np.array([trial[axis][arch].eta_rf for trial in per_trial])
            rows.append(
                SweepRow(float(axis), arch, float(rates.mean()), _standard_error(rates), len(rates), float(etas.mean()))
            )
    return SweepTable(axis_name, tuple(rows))


def depth_sweep(
    scenario: ScenarioConfig,
    n_chains: int,
    m_list,
    power_w: float,
    opts: OptimizerOptions,
    q_bits=DEFAULT_Q_BITS,
    sweeps: int = 12,
    workers: int = 1,
    return_trials: bool = False,
):
    """Mean sum-rate versus cascade depth at a fixed injected power.

    Every depth is programmed independently (no warm starts); the
    depth-independent architectures are evaluated once per trial and their
    rows repeat identically across the axis.
    """
    if not m_list:
        raise ValueError("m_list must be nonempty")
    worker = functools.partial(
        _depth_trial,
        scenario=scenario,
        n_chains=n_chains,
        m_list=tuple(m_list),
        power_w=power_w,
        opts=opts,
        q_bits=tuple(q_bits),
        sweeps=sweeps,
    )
    outcomes = _map_trials(worker, scenario.n_trials, workers)
    per_trial = [
        {depth: {**static, **per_depth[depth]} for depth in m_list}
        for static, per_depth in outcomes
    ]
    table = _aggregate("depth", list(m_list), per_trial, architecture_order(q_bits))
    return (table, per_trial) if return_trials else table


def power_sweep(
    scenario: ScenarioConfig,
    spec: NetworkSpec,
    powers_dbm,
    opts: OptimizerOptions,
    q_bits=DEFAULT_Q_BITS,
    sweeps: int = 12,
    workers: int = 1,
    return_trials: bool = False,
):
    """Mean sum-rate versus injected power (dBm axis) at a fixed depth.

    The analog stages depend only on the channel, so each trial programs once
    and only the digital stages and metrics are recomputed per power point.
    """
    if not powers_dbm:
        raise ValueError("powers_dbm must be nonempty")
    if spec.n_antennas != scenario.n_antennas:
        raise ValueError("network and scenario disagree on n_antennas")
    worker = functools.partial(
        _power_trial,
        scenario=scenario,
        spec=spec,
        powers_dbm=tuple(powers_dbm),
        opts=opts,
        q_bits=tuple(q_bits),
        sweeps=sweeps,
    )
    per_trial = _map_trials(worker, scenario.n_trials, workers)
    table = _aggregate("power_dbm", [float(p) for p in powers_dbm], per_trial, architecture_order(q_bits))
    return (table, per_trial) if return_trials else table
