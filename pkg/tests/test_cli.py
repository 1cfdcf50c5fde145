"""Config parsing, command dispatch, artifacts, determinism, exit codes."""

import json

import numpy as np
import pytest

from nhssh.cli import main, parse_config, run
from nhssh.errors import ParseError, ValidationError

import oracles


def test_parse_minimal_zak_fills_defaults():
    cfg = parse_config('{"command": "zak", "delta": 0.15, "Delta": 0.1}')
    assert cfg.command == "zak"
    assert cfg.params["n_k"] == 400
    assert cfg.params["n_quad"] == 4096
    assert cfg.params["flux"] == 0.0


def test_parse_roundtrip_identity():
    text = '{"command": "zak", "delta": 0.15, "Delta": 0.1}'
    cfg = parse_config(text)
    again = parse_config(cfg.normalized())
    assert again.normalized() == cfg.normalized()


def test_parse_missing_field_names_it():
    with pytest.raises(ValidationError) as err:
        parse_config('{"command": "zak", "delta": 0.15}')
    assert err.value.field == "Delta"


def test_parse_error_reports_line():
    with pytest.raises(ParseError) as err:
        parse_config('{"command": "zak",\n  "delta": }')
    assert err.value.line == 2


def test_parse_rejects_unknown_command():
    with pytest.raises(ValidationError):
        parse_config('{"command": "frobnicate"}')


def test_parse_rejects_non_finite():
    with pytest.raises(ValidationError) as err:
        parse_config('{"command": "zak", "delta": 0.15, "Delta": Infinity}')
    assert err.value.field == "Delta"


def test_parse_rejects_non_numeric():
    with pytest.raises(ValidationError) as err:
        parse_config('{"command": "zak", "delta": 0.15, "Delta": [1, 2]}')
    assert err.value.field == "Delta"


def test_zak_command_cross_method_agreement(tmp_path):
    cfg = parse_config('{"command": "zak", "delta": 0.15, "Delta": 0.1}')
    run(cfg, tmp_path)
    rows = (tmp_path / "zak.csv").read_text().splitlines()
    table = {r.split(",")[0]: r.split(",") for r in rows[1:]}
    closed = complex(float(table["closed_form"][3]), float(table["closed_form"][4]))
    wilson = complex(float(table["wilson_loop"][3]), float(table["wilson_loop"][4]))
    quad = complex(float(table["quadrature"][3]), float(table["quadrature"][4]))
    gamma = complex(float(table["adiabatic_pi"][3]), float(table["adiabatic_pi"][4]))
    assert abs(closed.real - np.pi / 2) < 1e-12
    assert abs(wilson - closed) < 1e-6
    assert abs(quad - closed) < 1e-10
    assert abs(gamma.imag - closed.imag) < 1e-8
    manifest = (tmp_path / "manifest.txt").read_text()
    assert "xi = " in manifest


def test_spectrum_command(tmp_path):
    cfg = parse_config('{"command": "spectrum", "delta": 0.15, "Delta": 0.1, "n_k": 64}')
    run(cfg, tmp_path)
    lines = (tmp_path / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "k,re_eps_plus,im_eps_plus,re_eps_minus,im_eps_minus"
    assert len(lines) == 65
    assert "classification = real" in (tmp_path / "manifest.txt").read_text()


def test_network_check_command(tmp_path):
    cfg = parse_config(
        '{"command": "network-check", "n_a": 2, "n_b": 2, "n_d": 2,'
        ' "delta": 0.15, "Delta": 0.1, "flux": 0.4}'
    )
    run(cfg, tmp_path)
    manifest = (tmp_path / "manifest.txt").read_text()
    assert "passed = True" in manifest
    mismatch = float(
        [l for l in manifest.splitlines() if l.startswith("max_spectral_mismatch")][0].split("=")[1]
    )
    assert mismatch < 1e-10


def test_determinism_byte_identical(tmp_path):
    cfg = parse_config('{"command": "zak", "delta": 0.15, "Delta": 0.1}')
    run(cfg, tmp_path / "a")
    run(cfg, tmp_path / "b")
    assert (tmp_path / "a/zak.csv").read_bytes() == (tmp_path / "b/zak.csv").read_bytes()
    assert (tmp_path / "a/manifest.txt").read_bytes() == (tmp_path / "b/manifest.txt").read_bytes()


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"command": "zak", "delta": 0.15}')
    assert main(["--config", str(bad), "--out", str(tmp_path / "o1")]) == 2

    broken = tmp_path / "broken.json"
    broken.write_text('{"command": "zak", "delta": 0.1, "Delta": 0.5}')
    assert main(["--config", str(broken), "--out", str(tmp_path / "o2")]) == 3

    good = tmp_path / "good.json"
    good.write_text('{"command": "zak", "delta": 0.15, "Delta": 0.1}')
    assert main(["--config", str(good), "--out", str(tmp_path / "o3")]) == 0
    assert (tmp_path / "o3/zak.csv").exists()


def test_cli_overrides_and_sweep(tmp_path):
    good = tmp_path / "cfg.json"
    good.write_text('{"command": "zak", "delta": 0.15, "Delta": 0.1}')
    code = main([
        "--config", str(good), "--out", str(tmp_path / "sw"),
        "--nk", "100", "--sweep", "Delta=0.05:0.1:2",
    ])
    assert code == 0
    for i in (0, 1):
        sub = tmp_path / "sw" / f"sweep_Delta_{i:03d}"
        assert (sub / "zak.csv").exists()
        assert f"n_k = 100" in (sub / "manifest.txt").read_text()


def test_evolve_command_small(tmp_path):
    cfg = parse_config(json.dumps({
        "command": "evolve", "n_cells": 40, "delta": 0.15, "Delta": 0.1,
        "center": 40, "beta": 0.05, "alpha": 0.1, "T": 20.0,
    }))
    run(cfg, tmp_path)
    lines = (tmp_path / "summary.csv").read_text().splitlines()
    assert lines[0] == "t,dirac_norm,center"
    assert (tmp_path / "snapshots.csv").exists()
    manifest = (tmp_path / "manifest.txt").read_text()
    assert "xi = " in manifest and "predicted_norm_gain" in manifest


def test_scatter_command_small(tmp_path):
    cfg = parse_config(json.dumps({
        "command": "scatter", "n_a": 30, "n_b": 30, "n_d": 30,
        "delta": -0.3, "Delta": 0.05, "center": 30, "alpha": 0.07,
        "timing": "before_arrival", "rate": 0.3, "total_time": 260.0,
    }))
    run(cfg, tmp_path)
    manifest = dict(
        line.split(" = ") for line in (tmp_path / "manifest.txt").read_text().splitlines()
    )
    assert float(manifest["transmission"]) > 0.98
    assert (tmp_path / "scatter.csv").read_text().splitlines()[0] == (
        "t,prob_A,prob_ring,prob_D,virtual_a,virtual_b,dirac_norm"
    )
