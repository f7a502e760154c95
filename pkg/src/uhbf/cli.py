"""Command-line entry point: sweeps, verification, and the depth guideline.

Subcommands:
  depth-sweep   mean sum-rate versus cascade depth, CSV + manifest output
  power-sweep   mean sum-rate versus injected power (dBm axis)
  verify        run the built-in invariant checks
  guideline     print the necessary depth for given (N, r, S)

Powers are accepted in dBm and converted to watts once at this boundary.
"""

from __future__ import annotations

import argparse
import datetime
import os
import sys
from pathlib import Path

from . import __version__
from .cli_io import table_has_nonfinite, write_manifest, write_sweep_csv
from .config import (
    ExperimentConfig,
    config_to_dict,
    desk_profile,
    load_config,
    paper_scale_profile,
)
from .harness import dbm_to_watts, depth_sweep, power_sweep
from .precoding import depth_guideline

THREADS_ENV_VAR = "UHBF_THREADS"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uhbf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, default_out, help_text in (
        ("depth-sweep", "depth_sweep.csv", "sum-rate versus cascade depth at fixed power"),
        ("power-sweep", "power_sweep.csv", "sum-rate versus injected power at fixed depth"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        profile = cmd.add_mutually_exclusive_group()
        profile.add_argument("--config", type=Path, help="JSON experiment config")
        profile.add_argument(
            "--paper-scale", action="store_true", help="use the full-scale profile (N=512, 16 streams, 500 trials)"
        )
        cmd.add_argument("--seed", type=int, help="override both random streams")
        cmd.add_argument("--out", type=Path, default=Path(default_out), help="output CSV path")
        cmd.add_argument("--threads", type=int, help=f"worker processes (default ${THREADS_ENV_VAR} or 1)")

    sub.add_parser("verify", help="run the built-in invariant checks")

    guide = sub.add_parser("guideline", help="print the necessary cascade depth")
    guide.add_argument("--n", type=int, required=True, help="number of antennas")
    guide.add_argument("--r", type=int, required=True, help="number of RF chains")
    guide.add_argument("--s", type=int, required=True, help="number of streams")
    return parser


def _resolve_config(args) -> ExperimentConfig:
    if args.config is not None:
        config = load_config(args.config)
    elif args.paper_scale:
        config = paper_scale_profile()
    else:
        config = desk_profile()
    if args.seed is not None:
        config = config.with_seed(args.seed)
    return config


def _resolve_threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get(THREADS_ENV_VAR, "")
    return max(1, int(env)) if env.strip() else 1


def _run_sweep(args, command: str) -> int:
    try:
        config = _resolve_config(args)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    workers = _resolve_threads(args)
    started = datetime.datetime.now(datetime.timezone.utc)
    if command == "depth-sweep":
        table = depth_sweep(
            config.scenario,
            config.network.n_chains,
            config.depth_sweep.depths,
            dbm_to_watts(config.depth_sweep.power_dbm),
            config.optimizer,
            q_bits=config.quantization.bits,
            sweeps=config.quantization.sweeps,
            workers=workers,
        )
    else:
        table = power_sweep(
            config.scenario,
            config.network_spec(),
            config.power_sweep.powers_dbm,
            config.optimizer,
            q_bits=config.quantization.bits,
            sweeps=config.quantization.sweeps,
            workers=workers,
        )
    finished = datetime.datetime.now(datetime.timezone.utc)

    out = Path(args.out)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(out, table)
    manifest_path = out.parent / "manifest.json"
    write_manifest(
        manifest_path,
        {
            "command": command,
            "version": __version__,
            "seed": config.scenario.rng_seed,
            "config": config_to_dict(config),
            "started_utc": started.isoformat(),
            "finished_utc": finished.isoformat(),
            "outputs": {"csv": str(out), "manifest": str(manifest_path)},
        },
    )

    bad = table_has_nonfinite(table)
    if bad:
        print(f"error: non-finite results in rows: {', '.join(bad)}", file=sys.stderr)
        return 3
    print(f"{command}: {len(table.rows)} rows -> {out} (manifest: {manifest_path})")
    return 0


def _run_verify() -> int:
    from .verify import run_all

    results = run_all()
    failures = 0
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        failures += not result.passed
        print(f"[{status}] {result.name}: {result.detail}")
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 1


def _run_guideline(args) -> int:
    try:
        print(depth_guideline(args.n, args.r, args.s))
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command in ("depth-sweep", "power-sweep"):
        return _run_sweep(args, args.command)
    if args.command == "verify":
        return _run_verify()
    return _run_guideline(args)


if __name__ == "__main__":
    raise SystemExit(main())
