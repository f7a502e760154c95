"""CLI surface: config round-trip, CSV/manifest emission, determinism."""

import json
from pathlib import Path

import pytest

from uhbf.cli import main
from uhbf.cli_io import CSV_HEADER
from uhbf.config import (
    config_from_dict,
    config_to_dict,
    desk_profile,
    load_config,
    paper_scale_profile,
    save_config,
)


@pytest.fixture()
def tiny_config_path(tmp_path):
    config = desk_profile(seed=7)
    doc = config_to_dict(config)
    doc["scenario"].update(n_antennas=16, n_users=2, n_trials=3)
    doc["network"].update(n_chains=2, depth=3)
    doc["optimizer"].update(iterations=40, restarts=1)
    doc["quantization"].update(bits=[2], sweeps=3)
    doc["depth_sweep"].update(depths=[2, 3])
    doc["power_sweep"].update(powers_dbm=[-10.0, 0.0])
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(doc))
    return path


class TestConfig:
    def test_round_trip_is_identity(self):
        config = desk_profile()
        assert config_from_dict(config_to_dict(config)) == config
        full = paper_scale_profile()
        assert config_from_dict(config_to_dict(full)) == full

    def test_file_round_trip(self, tmp_path):
        config = paper_scale_profile(seed=99)
        path = tmp_path / "config.json"
        save_config(path, config)
        assert load_config(path) == config

    def test_unknown_section_rejected(self):
        with pytest.raises(ValueError, match="unknown config sections"):
            config_from_dict({"mystery": {}})

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="unknown keys"):
            config_from_dict({"scenario": {"antennas": 4}})

    def test_desk_profile_depth_follows_guideline(self):
        from uhbf.precoding import depth_guideline

        config = desk_profile()
        scen = config.scenario
        assert config.network.depth == depth_guideline(scen.n_antennas, config.network.n_chains, scen.n_users)

    def test_paper_scale_values(self):
        config = paper_scale_profile()
        assert config.scenario.n_antennas == 512
        assert config.scenario.n_users == 16
        assert config.scenario.n_trials == 500
        assert config.network.depth == 32
        assert config.depth_sweep.depths == (16, 32, 48, 64)
        assert config.power_sweep.powers_dbm[0] == -20.0
        assert config.power_sweep.powers_dbm[-1] == 50.0
        assert len(config.power_sweep.powers_dbm) == 15


class TestGuidelineCommand:
    def test_full_scale_depth(self, capsys):
        assert main(["guideline", "--n", "512", "--r", "16", "--s", "16"]) == 0
        assert capsys.readouterr().out.strip() == "32"

    def test_invalid_arguments_fail(self, capsys):
        assert main(["guideline", "--n", "16", "--r", "4", "--s", "8"]) == 2
        assert "error" in capsys.readouterr().err


class TestSweepCommands:
    def test_depth_sweep_writes_csv_and_manifest(self, tiny_config_path, tmp_path, capsys):
        out = tmp_path / "results" / "depth.csv"
        code = main(["depth-sweep", "--config", str(tiny_config_path), "--out", str(out)])
        assert code == 0
        text = out.read_text()
        assert text.splitlines()[0] == CSV_HEADER
        manifest = json.loads((out.parent / "manifest.json").read_text())
        assert manifest["command"] == "depth-sweep"
        assert manifest["seed"] == 7
        assert manifest["config"]["scenario"]["n_antennas"] == 16
        # replaying the manifest's config reproduces the CSV byte-for-byte
        replay_cfg = tmp_path / "replay.json"
        replay_cfg.write_text(json.dumps(manifest["config"]))
        replay_out = tmp_path / "replay.csv"
        assert main(["depth-sweep", "--config", str(replay_cfg), "--out", str(replay_out)]) == 0
        assert replay_out.read_bytes() == out.read_bytes()

    def test_reruns_are_byte_identical(self, tiny_config_path, tmp_path):
        outs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            assert main(["power-sweep", "--config", str(tiny_config_path), "--seed", "3", "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_seed_override_changes_results(self, tiny_config_path, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        assert main(["depth-sweep", "--config", str(tiny_config_path), "--seed", "1", "--out", str(a)]) == 0
        assert main(["depth-sweep", "--config", str(tiny_config_path), "--seed", "2", "--out", str(b)]) == 0
        assert a.read_bytes() != b.read_bytes()

    def test_bad_config_fails_with_diagnostic(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["depth-sweep", "--config", str(bad), "--out", str(tmp_path / "x.csv")]) == 2
        assert "error" in capsys.readouterr().err

    def test_missing_config_fails(self, tmp_path, capsys):
        assert main(["depth-sweep", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path / "x.csv")]) == 2
        assert "not found" in capsys.readouterr().err

    def test_threads_env_fallback(self, tiny_config_path, tmp_path, monkeypatch):
        monkeypatch.setenv("UHBF_THREADS", "2")
        out = tmp_path / "threads.csv"
        assert main(["depth-sweep", "--config", str(tiny_config_path), "--out", str(out)]) == 0
        serial = tmp_path / "serial.csv"
        monkeypatch.setenv("UHBF_THREADS", "1")
        assert main(["depth-sweep", "--config", str(tiny_config_path), "--out", str(serial)]) == 0
        assert out.read_bytes() == serial.read_bytes()


class TestVerifyCommand:
    def test_all_checks_pass(self, capsys):
        assert main(["verify"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        assert "checks passed" in out
