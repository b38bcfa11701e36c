"""Command-line interface behaviour: outputs, manifests, exit codes."""

import hashlib
import json
import os

import numpy as np
import pytest

from spinbus.cli import parse_and_dispatch


def run(capsys, *argv):
    code = parse_and_dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--N", "5")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "k,lambda"
    assert len(lines) == 6
    values = sorted(float(line.split(",")[1]) for line in lines[1:])
    assert abs(values[0] + 4 * np.cos(np.pi / 6)) < 1e-12


def test_amplitude_json(capsys):
    code, out, _ = run(capsys, "amplitude", "--N", "7", "--n", "2", "--h", "5",
                       "--sources", "1,2", "--targets", "6,7", "--t", "10")
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"real", "imag", "modulus"}
    assert data["modulus"] == pytest.approx(abs(complex(data["real"], data["imag"])))


def test_rdm_json(capsys):
    code, out, _ = run(capsys, "rdm", "--N", "7", "--n", "2", "--h", "5",
                       "--state", "1,0,0,0,0,0,0,0", "--t", "0")
    assert code == 0
    data = json.loads(out)
    assert data["basis"] == ["11", "10", "01", "00"]
    rho = np.array(data["real"]) + 1j * np.array(data["imag"])
    assert rho.shape == (4, 4)
    assert abs(np.trace(rho) - 1.0) < 1e-12
    assert abs(rho[3, 3] - 1.0) < 1e-12  # nothing has moved yet


def test_fidelity_closed_form_json(capsys):
    code, out, _ = run(capsys, "fidelity", "--N", "7", "--class", "omega1",
                       "--h", "5", "--t", "41.2")
    assert code == 0
    data = json.loads(out)
    assert data["method"] == "closed-form-omega1"
    assert data["stderr"] is None
    assert 0.0 <= data["value"] <= 1.0


def test_fidelity_mc_has_stderr(capsys):
    code, out, _ = run(capsys, "fidelity", "--N", "7", "--class", "general",
                       "--h", "5", "--t", "41.2", "--samples", "2000", "--seed", "3")
    assert code == 0
    data = json.loads(out)
    assert data["stderr"] > 0
    assert data["method"] == "monte-carlo-general"


def test_scan_time_manifest_roundtrip(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    code, _, _ = run(capsys, "scan-time", "--N", "7", "--n", "2", "--h", "12",
                     "--class", "omega1", "--t-max", "1500", "--out", str(out))
    assert code == 0
    manifest = json.loads((tmp_path / "scan.csv.manifest.json").read_text())
    digest = hashlib.sha256(out.read_bytes()).hexdigest()
    assert manifest["outputs"]["scan.csv"]["sha256"] == digest
    assert manifest["tool"] == "spinbus"

    again = tmp_path / "again.csv"
    code, _, _ = run(capsys, "scan-time",
                     "--config", str(tmp_path / "scan.csv.manifest.json"),
                     "--out", str(again))
    assert code == 0
    assert again.read_bytes() == out.read_bytes()


def test_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"N": 5, "h": 3.0, "n": 1, "state_class": "one-qubit",
                               "t": 2.0}))
    code, out1, _ = run(capsys, "fidelity", "--config", str(cfg))
    assert code == 0
    code, out2, _ = run(capsys, "fidelity", "--config", str(cfg), "--t", "4.0")
    assert code == 0
    assert out1 != out2


def test_scan_field_rows(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "scan-field", "--N", "7", "--class", "omega1",
                     "--h-list", "0,5", "--t-max", "400", "--out", str(out))
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "N,n,h,t_star,fbar_max,class,seed"
    assert len(lines) == 3
    assert lines[1].split(",")[2] == "0"


def test_threshold_command(tmp_path, capsys):
    out = tmp_path / "th.csv"
    code, _, _ = run(capsys, "threshold", "--N-list", "7", "--target", "0.8",
                     "--t-max", "1000", "--h-cap", "20", "--out", str(out))
    assert code == 0
    rows = out.read_text().strip().split("\n")
    assert len(rows) == 2
    field = float(rows[1].split(",")[2])
    assert 0.0 <= field <= 20.0


def test_reproduce_shrunk(tmp_path, capsys):
    out = tmp_path / "fig.csv"
    code, _, _ = run(capsys, "reproduce", "--figure", "4a", "--h-list", "0,10",
                     "--t-max", "500", "--samples", "512", "--out", str(out))
    assert code == 0
    rows = out.read_text().strip().split("\n")
    assert len(rows) == 3


def test_verify_command(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert out.count("OK") >= 5


def test_exit_code_usage_error(capsys):
    code, _, err = run(capsys, "fidelity", "--N", "7", "--class", "omega1")
    assert code == 2
    assert "--t" in err


def test_exit_code_domain_error(capsys):
    code, _, err = run(capsys, "rdm", "--N", "7", "--h", "-3",
                       "--state", "1,0,0,0,0,0,0,0", "--t", "1")
    assert code == 1
    assert "field" in err


def test_exit_code_bad_subcommand(capsys):
    code = parse_and_dispatch(["no-such-command"])
    capsys.readouterr()
    assert code == 2


def test_threads_env_fallback(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QST_THREADS", "2")
    out = tmp_path / "scan.csv"
    code, _, _ = run(capsys, "scan-time", "--N", "7", "--n", "2", "--h", "8",
                     "--class", "omega1", "--t-max", "800", "--out", str(out))
    assert code == 0
    manifest = json.loads((tmp_path / "scan.csv.manifest.json").read_text())
    assert manifest["params"]["threads"] == 2


def test_state_parsing_rejects_short_input(capsys):
    code, _, err = run(capsys, "rdm", "--N", "7", "--h", "5",
                       "--state", "1,0,0", "--t", "1")
    assert code == 2
    assert "eight" in err
