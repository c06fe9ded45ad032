import filecmp
import os
import re
import subprocess
from pathlib import Path

import pytest
import yaml

CLI = os.environ.get("FLATSAT_CLI", "flatsat")
CONFIGS = Path(os.environ.get("FLATSAT_CONFIGS", Path(__file__).resolve().parents[2] / "configs"))


def flatsat(*args, out_dir=None):
    env = dict(os.environ)
    if out_dir is not None:
        env["FLATSAT_OUTPUT_DIR"] = str(out_dir)
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, env=env)


def value(text, key):
    match = re.search(rf"^{re.escape(key)} = (\S+)$", text, re.MULTILINE)
    assert match, f"{key} missing from:\n{text}"
    return float(match.group(1))


def test_synth_reference_report(tmp_path):
    r = flatsat("synth", "--config", CONFIGS / "reference.yaml", out_dir=tmp_path)
    assert r.returncode == 0, r.stderr
    assert value(r.stdout, "rho") == pytest.approx(2.9019, abs=1e-3)
    assert value(r.stdout, "eps") == pytest.approx(3.8692, abs=1e-3)
    assert (tmp_path / "certificate.yaml").is_file()
    assert (tmp_path / "synth_report.txt").read_text() in r.stdout


def test_synth_fast_decay_gain(tmp_path):
    r = flatsat("synth", "--config", CONFIGS / "alpha125.yaml", out_dir=tmp_path)
    assert r.returncode == 0, r.stderr
    assert value(r.stdout, "p1") == pytest.approx(0.9766, abs=1e-2)
    assert value(r.stdout, "p2") == pytest.approx(0.7813, abs=1e-2)
    assert value(r.stdout, "p3") == pytest.approx(1.25, abs=1e-2)


def test_synth_rejects_thrust_below_gravity(tmp_path):
    r = flatsat("synth", "--config", CONFIGS / "infeasible_hover.yaml", out_dir=tmp_path)
    assert r.returncode == 1
    assert "infeasible hover" in r.stderr


def test_synth_unknown_key_is_config_error(tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("synthesis:\n  alpha: 0.75\n  alhpa: 1\n")
    r = flatsat("synth", "--config", cfg, out_dir=tmp_path)
    assert r.returncode == 1
    assert "alhpa" in r.stderr


def test_saturate_downward_ray():
    r = flatsat("saturate", "0", "0", "-19.62")
    assert r.returncode == 0, r.stderr
    assert value(r.stdout, "lambda") == pytest.approx(0.5, abs=1e-12)
    assert "active = halfspace" in r.stdout


def test_saturate_zero_is_unsaturated():
    r = flatsat("saturate", "0", "0", "0")
    assert r.returncode == 0, r.stderr
    assert value(r.stdout, "lambda") == 1.0
    assert "saturated = false" in r.stdout


def test_saturate_oracle_agrees():
    r = flatsat("saturate", "3", "-4", "12", "--oracle")
    assert r.returncode == 0, r.stderr
    assert value(r.stdout, "oracle_lambda") == pytest.approx(value(r.stdout, "lambda"), abs=1e-8)


def test_saturate_needs_three_components():
    assert flatsat("saturate", "1", "2").returncode == 1


def test_verify_roundtrip_and_tamper(tmp_path):
    assert flatsat("synth", "--config", CONFIGS / "reference.yaml", out_dir=tmp_path).returncode == 0
    cert = tmp_path / "certificate.yaml"
    r = flatsat("verify", "--certificate", cert, "--samples", 10000, "--seed", 3)
    assert r.returncode == 0, r.stdout + r.stderr
    assert "result = pass" in r.stdout

    doc = yaml.safe_load(cert.read_text())
    doc["level"]["eps"] *= 1.5
    tampered = tmp_path / "tampered.yaml"
    tampered.write_text(yaml.safe_dump(doc))
    r = flatsat("verify", "--certificate", tampered, "--samples", 10000, "--seed", 3)
    assert r.returncode == 3
    assert "result = fail" in r.stdout
    assert "worst_sample" in r.stdout


def test_verify_zero_samples_is_usage_error(tmp_path):
    assert flatsat("synth", out_dir=tmp_path).returncode == 0
    r = flatsat("verify", "--certificate", tmp_path / "certificate.yaml", "--samples", 0)
    assert r.returncode == 1
    assert "samples" in r.stderr


def test_simulate_accepts_synth_output(tmp_path):
    assert flatsat("synth", "--config", CONFIGS / "reference.yaml", out_dir=tmp_path).returncode == 0
    sim_dir = tmp_path / "sim"
    r = flatsat("simulate", "--config", CONFIGS / "reference.yaml",
                "--certificate", tmp_path / "certificate.yaml", "--out", sim_dir)
    assert r.returncode == 0, r.stderr
    summary = yaml.safe_load((sim_dir / "summary.yaml").read_text())
    assert summary["clean"] is True


def test_simulate_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert flatsat("simulate", "--config", CONFIGS / "reference.yaml", "--out", d).returncode == 0
    assert filecmp.cmp(a / "trace.csv", b / "trace.csv", shallow=False)
    header = (a / "trace.csv").read_text().splitlines()[0]
    assert header.startswith("run,t,x,y,z,")


def test_setpoint_converges(tmp_path):
    r = flatsat("simulate", "--config", CONFIGS / "setpoint.yaml", out_dir=tmp_path)
    assert r.returncode == 0, r.stderr
    assert value(r.stdout, "steady_state_max_error") < 0.01


def test_circular_prints_steady_state_rms(tmp_path):
    r = flatsat("simulate", "--config", CONFIGS / "circular.yaml", out_dir=tmp_path)
    assert r.returncode == 0, r.stderr
    assert value(r.stdout, "steady_state_rms_error") < 0.10
    assert "monitors = clean" in r.stdout


def test_gamma_sweep(tmp_path):
    r = flatsat("sweep", "--config", CONFIGS / "sweep.yaml", out_dir=tmp_path)
    assert r.returncode == 0, r.stdout + r.stderr
    csvs = sorted(tmp_path.glob("trace_gamma_*.csv"))
    assert len(csvs) == 3
    summary = yaml.safe_load((tmp_path / "sweep_summary.yaml").read_text())
    assert summary["all_clean"] is True
    by_gamma = {e["gamma"]: e for e in summary["sweep"]}
    assert by_gamma[1]["saturated_steps"] == 0
    assert all(e["clean_runs"] == e["runs"] == 20 for e in summary["sweep"])


def test_missing_subcommand_is_usage_error():
    assert flatsat().returncode == 1
