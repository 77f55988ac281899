import csv
import os
import subprocess
import sys

import pytest

from svipipe import cli
from svipipe.analysis import FilterProfile
from svipipe.config import ConfigError, build_config, dump_config, filter_profile, load_config

from conftest import MINI, MINI_TOML, PKG_DATA

GOLDEN = os.path.join(os.path.dirname(__file__), "golden", "default_filter.toml")


# config

def test_filter_dump_matches_golden():
    with open(GOLDEN, encoding="utf-8") as fh:
        assert dump_config(build_config(), ["filter"]) == fh.read()


def test_example_config_is_the_defaults():
    cfg = load_config(os.path.join(PKG_DATA, "example.toml"))
    cfg.pop("_base_dir", None)
    assert cfg == build_config()


def test_unknown_key_rejected(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text("[filter]\nblur_treshold = 5\n")
    with pytest.raises(ConfigError, match="blur_treshold"):
        load_config(p)


def test_wrong_type_rejected(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text("[cluster]\nk = \"five\"\n")
    with pytest.raises(ConfigError):
        load_config(p)


def test_overrides_win_and_profile_builds(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text("[filter]\nspeed_max_kmh = 80.0\n")
    cfg = load_config(p, {"filter.blur_threshold": 42.0})
    prof = filter_profile(cfg)
    assert isinstance(prof, FilterProfile)
    assert (prof.speed_max_kmh, prof.blur_threshold) == (80.0, 42.0)


def test_dump_round_trips(tmp_path):
    cfg = build_config(overrides={"cluster.k": 7})
    p = tmp_path / "d.toml"
    p.write_text(dump_config(cfg))
    back = load_config(p)
    back.pop("_base_dir", None)
    assert back == cfg


# command line

def test_help_exit_zero(capsys):
    assert cli.run(["--help"]) == 0
    assert "pipeline" in capsys.readouterr().out


def test_subcommand_help(capsys):
    for sub in ("download", "metadata", "transform", "features", "filter", "cluster", "viz", "pipeline"):
        assert cli.run([sub, "--help"]) == 0
    capsys.readouterr()


def test_unknown_subcommand_exit_two(capsys):
    assert cli.run(["frobnicate"]) == 2
    assert cli.run([]) == 2
    capsys.readouterr()


def test_bad_config_exit_two(tmp_path, capsys):
    p = tmp_path / "c.toml"
    p.write_text("[nope]\nx = 1\n")
    assert cli.run(["filter", "--config", str(p), "--out", str(tmp_path)]) == 2
    assert "level=error" in capsys.readouterr().err


def test_bad_workers_exit_two(tmp_path, capsys):
    assert cli.run(["filter", "--workers", "0", "--out", str(tmp_path)]) == 2
    capsys.readouterr()


def test_missing_input_exit_one(tmp_path, capsys):
    # metadata without a prior download has no images.csv
    assert cli.run(["metadata", "--out", str(tmp_path / "empty")]) == 1
    err = capsys.readouterr().err
    assert "level=error" in err and "module=svipipe.cli" in err


def test_place_not_found_exit_one(tmp_path, capsys):
    rc = cli.run(["download", "--config", MINI_TOML, "--region", "atlantis", "--out", str(tmp_path)])
    assert rc == 1
    assert "place not found" in capsys.readouterr().err


def test_stepwise_run(tmp_path, capsys):
    out = str(tmp_path / "run")
    base = ["--config", MINI_TOML, "--out", out, "-q"]
    for step in ("download", "metadata", "features", "filter", "cluster", "transform"):
        assert cli.run([step] + base) == 0, step
    for name in ("images.csv", "metadata.csv", "aggregates_hex.csv", "features.csv",
                 "suitability.csv", "clusters.csv", "clusters.geojson", "elbow.csv"):
        assert os.path.exists(os.path.join(out, name)), name
    with open(os.path.join(out, "suitability.csv"), newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 50 and {r["is_suitable"] for r in rows} == {"true", "false"}
    svg = str(tmp_path / "speed.svg")
    assert cli.run(["viz", "--config", MINI_TOML, "--data-dir", out, "--kind", "point",
                    "--variable", "speed_kmh", "--out", svg, "-q"]) == 0
    assert os.path.exists(svg) and os.path.exists(str(tmp_path / "speed.geojson"))
    assert cli.run(["viz", "--config", MINI_TOML, "--data-dir", out, "--kind", "hex",
                    "--variable", "no_such_column", "--out", svg, "-q"]) == 1
    capsys.readouterr()


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "svipipe.cli", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "download" in out.stdout


def test_mock_server_subcommand_help(capsys):
    assert cli.run(["mock-server", "--help"]) == 0
    assert "--fail-first" in capsys.readouterr().out
