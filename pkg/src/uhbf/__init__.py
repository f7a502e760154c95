"""Hybrid beamforming with a programmable unitary RF front end.

The analog stage is an interlaced cascade of a fixed DFT mixer and
programmable phase layers; it is semi-unitary for every setting, so injected
RF-chain power reaches the antennas without loss.  The package provides the
cascade itself, adjoint-gradient phase programming, q-bit quantization with
greedy refinement, physically modeled fully-connected and beam-selection
comparators, a spherical-wave channel, and a deterministic Monte-Carlo
harness with a CSV-emitting CLI.
"""

__version__ = "0.1.0"

from .baselines import BaselineResult, butler_select, evaluate_baseline, fc1_analog, fc2_analog
from .channel import ChannelRealization, ScenarioConfig, antenna_positions, sample_scene
from .harness import SweepTable, TrialResult, depth_sweep, power_sweep, run_trial
from .network import (
    Mixer,
    NetworkSpec,
    PhaseConfig,
    analog_beamformer,
    apply_processor,
    dft_mixer,
    rf_efficiency,
)
from .precoding import (
    PrecoderPair,
    closed_form_bb,
    depth_guideline,
    fully_digital_mmse,
    mmse_bb,
    target_subspace,
)
from .programming import OptimizerOptions, ProgrammingResult, RestartPool, program_continuous, subspace_score
from .quantization import QuantizationSpec, program_quantized, quantize_phases, refine_greedy
