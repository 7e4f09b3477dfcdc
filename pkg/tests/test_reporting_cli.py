import json
import os

import pytest

from orbitdepth.cli import main
from orbitdepth.reporting import Config, run_suite


def test_run_suite_unknown_name():
    with pytest.raises(KeyError):
        run_suite("bogus")


def test_suite_report_schema(tmp_path):
    cfg = Config(samples=5, k_max=2)
    code, records, path = run_suite("melnikov", cfg, str(tmp_path / "rep.json"))
    assert code == 0
    data = json.loads(open(path).read())
    assert data["pass"] is True
    assert {"manifest", "checks", "pass"} <= set(data)
    for rec in data["checks"]:
        assert {"id", "claim", "expected", "computed", "error", "tolerance",
                "passed", "runtime_ms"} <= set(rec)
    ids = [r["id"] for r in data["checks"]]
    assert len(ids) == len(set(ids))


def test_suite_rerun_deterministic(tmp_path):
    cfg = Config(samples=5, k_max=2)
    _, rec1, _ = run_suite("orbit", cfg, str(tmp_path / "a.json"))
    _, rec2, _ = run_suite("orbit", cfg, str(tmp_path / "b.json"))
    assert [(r.id, r.passed, r.error) for r in rec1] == \
           [(r.id, r.passed, r.error) for r in rec2]


def test_cli_orbit(capsys):
    assert main(["orbit", "var", "--word", "g", "--times", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["result"] == "d0 d1 d2 d3"
    assert main(["orbit", "depth", "--word", "[x,z]", "--max-degree", "3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["depth"] == 2
    assert main(["orbit", "project", "--word", "d0"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["projection"] == "d3^-1 d2^-1 d1^-1"
    assert main(["orbit", "mon", "--operator", "m", "--word", "d3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["result"] == "d2 d3 d2^-1"


def test_cli_repr(capsys):
    assert main(["repr", "check-v", "--k", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["pass"] is True
    assert main(["repr", "comm-scalar", "--k", "1", "--word", "x"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert (out["m"], out["n"]) == (1, 0)
    assert main(["repr", "impossible", "--terms", "3,1,1;-3,1,1"]) == 0
    assert json.loads(capsys.readouterr().out)["nonvanishing"] is True
    assert main(["repr", "certificate", "--k", "1", "--samples", "5"]) == 0
    assert json.loads(capsys.readouterr().out)["pass"] is True


def test_cli_mel(capsys):
    assert main(["mel", "wronskian", "--f", "t", "--g", "t^2"]) == 0
    assert json.loads(capsys.readouterr().out)["wronskian"] == "t**2"
    assert main(["mel", "build", "--alpha1", "t", "--alpha2", "t^2",
                 "--c0", "1", "--lambda", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["a1"] == "t**2 + 2*t" and out["a2"] == "t" and out["a3"] == "t**2 + t"
    assert main(["mel", "classify", "--a1", "t^2+2t", "--a2", "t",
                 "--a3", "t^2+t"]) == 0
    assert json.loads(capsys.readouterr().out)["classification"] == "LENGTH3"
    assert main(["mel", "mv", "--i", "3", "--a1", "t^2+2t", "--a2", "t",
                 "--a3", "t^2+t"]) == 0
    assert json.loads(capsys.readouterr().out)["mv"] == "t**2"
    assert main(["mel", "center", "--A", "t", "--c1", "0", "--lambda1", "1",
                 "--lambda", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["a1"] == "t" and out["a3"] == "t - 1"


def test_cli_mel_errors(capsys):
    assert main(["mel", "build", "--alpha1", "t", "--alpha2", "t",
                 "--c0", "0", "--lambda", "1"]) == 2
    assert "error" in capsys.readouterr().err


def test_cli_num(capsys, tmp_path):
    assert main(["num", "pairing", "--t", "0.25"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert all(rec["pass"] for rec in out)
    assert main(["num", "cauchy-suite", "--t", "0.36"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert all(rec["pass"] for rec in out)
    assert main(["num", "iterated", "--word", "[x,z]", "--forms",
                 "dphi2,dphi3", "--t", "0.36"]) == 0
    out = json.loads(capsys.readouterr().out)
    val = complex(out["computed"].replace("j", "j"))
    assert abs(val.real - 39.478) < 1e-2
    assert main(["num", "holonomy", "--word", "g", "--t", "0.36", "--eps",
                 "0.0", "--a1", "t^2+2t", "--a2", "t", "--a3", "t^2+t"]) == 0
    out = json.loads(capsys.readouterr().out)
    csv_path = str(tmp_path / "samples.csv")
    assert main(["num", "fit", "--word", "g", "--t", "0.36",
                 "--a1", "t^2+2t", "--a2", "t", "--a3", "t^2+t",
                 "--csv", csv_path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["zero_flags"]["1"] and out["zero_flags"]["2"]
    assert os.path.exists(csv_path)
    lines = open(csv_path).read().splitlines()
    assert lines[0] == "eps,re_displacement,im_displacement"
    assert len(lines) == 13


def test_cli_verify_and_report(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("OUTPUT_DIR", str(tmp_path))
    assert main(["verify", "melnikov"]) == 0
    captured = capsys.readouterr().out
    assert "checks passed" in captured
    out_csv = str(tmp_path / "all.csv")
    # config file with overrides
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"samples": 5, "k_max": 1, "seed": 7}))
    assert main(["verify", "repr", "--config", str(cfg_path)]) == 0


def test_cli_malformed_config(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["verify", "melnikov", "--config", str(bad)]) == 2
    assert "error" in capsys.readouterr().err
