"""Experiment configuration: one JSON document covering every knob.

Two built-in profiles ship with the package: the desk-scale profile (default,
minutes on a laptop) and the full-scale profile (N = 512, 16 streams, 500
trials) selected with ``--paper-scale``.  Parsing is strict: unknown keys are
rejected so a typo cannot silently fall back to a default.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .channel import ScenarioConfig
from .harness import DEFAULT_Q_BITS
from .network import NetworkSpec
from .programming import OptimizerOptions


@dataclass(frozen=True)
class QuantizationSettings:
    bits: tuple[int, ...] = DEFAULT_Q_BITS
    sweeps: int = 12


@dataclass(frozen=True)
class DepthSweepSettings:
    depths: tuple[int, ...] = (4, 8, 12, 16)
    power_dbm: float = 0.0


@dataclass(frozen=True)
class PowerSweepSettings:
    powers_dbm: tuple[float, ...] = (-20.0, -10.0, 0.0, 10.0, 20.0, 30.0)


@dataclass(frozen=True)
class NetworkSettings:
    n_chains: int = 4
    depth: int = 8  # used by the power sweep; the depth sweep supplies its own axis


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    network: NetworkSettings = field(default_factory=NetworkSettings)
    optimizer: OptimizerOptions = field(default_factory=OptimizerOptions)
    quantization: QuantizationSettings = field(default_factory=QuantizationSettings)
    depth_sweep: DepthSweepSettings = field(default_factory=DepthSweepSettings)
    power_sweep: PowerSweepSettings = field(default_factory=PowerSweepSettings)

    def network_spec(self, depth: int | None = None) -> NetworkSpec:
        return NetworkSpec(
            self.scenario.n_antennas,
            self.network.n_chains,
            self.network.depth if depth is None else depth,
        )

    def with_seed(self, seed: int) -> "ExperimentConfig":
        """Override both random streams (channel draws and phase inits)."""
        return dataclasses.replace(
            self,
            scenario=dataclasses.replace(self.scenario, rng_seed=seed),
            optimizer=dataclasses.replace(self.optimizer, rng_seed=seed),
        )


def desk_profile(seed: int = 7) -> ExperimentConfig:
    """Desk-scale defaults: N=64, 4 chains/streams, depth from the guideline."""
    return ExperimentConfig().with_seed(seed)


def paper_scale_profile(seed: int = 7) -> ExperimentConfig:
    """Full-scale setup: N=512, 16 chains/streams, depth 32, 500 trials."""
    return ExperimentConfig(
        scenario=ScenarioConfig(n_antennas=512, n_users=16, n_trials=500, rng_seed=seed),
        network=NetworkSettings(n_chains=16, depth=32),
        depth_sweep=DepthSweepSettings(depths=(16, 32, 48, 64), power_dbm=0.0),
        power_sweep=PowerSweepSettings(powers_dbm=tuple(float(p) for p in range(-20, 55, 5))),
    ).with_seed(seed)


_SECTIONS = {
    "scenario": ScenarioConfig,
    "network": NetworkSettings,
    "optimizer": OptimizerOptions,
    "quantization": QuantizationSettings,
    "depth_sweep": DepthSweepSettings,
    "power_sweep": PowerSweepSettings,
}

_TUPLE_FIELDS = {"rho_range_m", "theta_range_rad", "bits", "depths", "powers_dbm"}


def config_to_dict(config: ExperimentConfig) -> dict:
    doc: dict = {}
    for section, _ in _SECTIONS.items():
        values = dataclasses.asdict(getattr(config, section))
        doc[section] = {k: list(v) if isinstance(v, tuple) else v for k, v in values.items()}
    return doc


def config_from_dict(doc: dict) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ValueError("config document must be a JSON object")
    unknown = set(doc) - set(_SECTIONS)
    if unknown:
        raise ValueError(f"unknown config sections: {sorted(unknown)}")
    kwargs = {}
    for section, cls in _SECTIONS.items():
        payload = dict(doc.get(section, {}))
        names = {f.name for f in dataclasses.fields(cls)}
        bad = set(payload) - names
        if bad:
            raise ValueError(f"unknown keys in [{section}]: {sorted(bad)}")
        for key in _TUPLE_FIELDS & set(payload):
            payload[key] = tuple(payload[key])
        kwargs[section] = cls(**payload)
    return ExperimentConfig(**kwargs)


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ValueError(f"config file not found: {path}")
    except json.JSONDecodeError as err:
        raise ValueError(f"config file {path} is not valid JSON: {err}")
    return config_from_dict(doc)


def save_config(path: str | Path, config: ExperimentConfig) -> None:
    Path(path).write_text(json.dumps(config_to_dict(config), indent=2) + "\n")
