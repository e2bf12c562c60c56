import csv
import json

import numpy as np
import pytest

from riskcloud.cli import main
from riskcloud.config import ConfigError, parse_config


@pytest.fixture
def tiny_config(tmp_path):
    cfg = {
        "problem": {
            "marginals": [
                {"family": "uniform", "params": [0, 1]},
                {"family": "uniform", "params": [0, 1]},
            ],
            "cost": {"variant": "product"},
            "spectral": {"variant": "linear"},
        },
        "schedule": {"decades": [-1, 3]},
        "n": 40,
        "seed": 5,
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return path


def read_points(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return rows


def test_presets_listing(capsys):
    assert main(["presets"]) == 0
    out = capsys.readouterr().out
    assert len([l for l in out.strip().splitlines() if l]) == 6
    assert main(["presets", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert {d["name"] for d in data} == {
        "squared_sum", "partial_barycenter", "coulomb_cvar", "coulomb_quadratic", "river", "rates",
    }


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err.lower()


def test_solve_writes_artifacts(tiny_config, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["solve", str(tiny_config), "--out", str(out)]) == 0
    for name in ("points.csv", "trace.jsonl", "metrics.json", "cells.json", "marginals.json"):
        assert (out / name).exists(), name

    metrics = json.loads((out / "metrics.json").read_text())
    rows = read_points(out / "points.csv")
    assert len(rows) == 40
    # independent reader: risk = sum(omega_i / N * cost_i)
    risk = sum(float(r["omega"]) / len(rows) * float(r["cost"]) for r in rows)
    assert risk == pytest.approx(metrics["risk_value"], abs=1e-10)

    cells = json.loads((out / "cells.json").read_text())
    assert len(cells["marginals"]) == 2
    assert len(cells["marginals"][0]["cells"]) == 40

    trace_lines = [json.loads(l) for l in (out / "trace.jsonl").read_text().splitlines()]
    assert any(rec.get("summary") for rec in trace_lines)
    assert all("lambda" in rec for rec in trace_lines)


def test_solve_deterministic_rerun(tiny_config, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["solve", str(tiny_config), "--out", str(out1)]) == 0
    assert main(["solve", str(tiny_config), "--out", str(out2)]) == 0
    assert (out1 / "points.csv").read_bytes() == (out2 / "points.csv").read_bytes()
    assert (out1 / "cells.json").read_bytes() == (out2 / "cells.json").read_bytes()


def test_solve_seed_override_changes_points(tiny_config, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["solve", str(tiny_config), "--out", str(out1)]) == 0
    assert main(["solve", str(tiny_config), "--out", str(out2), "--seed", "6"]) == 0
    assert (out1 / "points.csv").read_bytes() != (out2 / "points.csv").read_bytes()


def test_config_schema_violations(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"problem": {}, "frobnicate": 1}))
    assert main(["solve", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "frobnicate" in err and "$" in err

    bad.write_text("{not json")
    assert main(["solve", str(bad)]) == 1
    assert "line 1" in capsys.readouterr().err

    bad.write_text(json.dumps({"preset": "river", "problem": {"marginals": []}}))
    assert main(["solve", str(bad)]) == 1
    assert "exactly one" in capsys.readouterr().err


def test_parse_config_messages():
    with pytest.raises(ConfigError, match=r"\$\.problem\.mode"):
        parse_config(
            {
                "problem": {
                    "marginals": [{"family": "uniform", "params": [0, 1]}] * 2,
                    "cost": {"variant": "product"},
                    "spectral": {"variant": "linear"},
                    "mode": "sideways",
                }
            }
        )
    with pytest.raises(ConfigError, match=r"\$\.schedule"):
        parse_config(
            {
                "problem": {
                    "marginals": [{"family": "uniform", "params": [0, 1]}] * 2,
                    "cost": {"variant": "product"},
                    "spectral": {"variant": "linear"},
                },
                "schedule": {"decades": [0, 2], "lambdas": [1.0]},
            }
        )
    with pytest.raises(ConfigError, match=r"\$\.n"):
        parse_config({"preset": "river", "n": 0})


def test_quantize_subcommand(tmp_path, capsys):
    dens = tmp_path / "dens.json"
    dens.write_text(json.dumps({"family": "uniform", "params": [0, 1]}))
    assert main(["quantize", str(dens), "--n", "4"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["atoms"] == [0.125, 0.375, 0.625, 0.875]
    assert payload["error"] == pytest.approx(1 / (2 * np.sqrt(3) * 4))
    out = tmp_path / "q.json"
    assert main(["quantize", str(dens), "--n", "2", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["n"] == 2


def test_comonotone_subcommand(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"preset": "river"}))
    out = tmp_path / "out"
    assert main(["comonotone", str(cfg), "--n", "64", "--out", str(out)]) == 0
    metrics = json.loads((out / "metrics.json").read_text())
    assert metrics["flips"] == [False, True, False, True, False, True]
    assert metrics["reference_value"] > 0
    # the quantized coupling's risk approaches the quadrature reference
    assert metrics["risk_value"] == pytest.approx(metrics["reference_value"], rel=0.05)
    rows = read_points(out / "points.csv")
    assert len(rows) == 64
    qs = [float(r["Q"]) for r in rows]
    ks = [float(r["Ks"]) for r in rows]
    assert np.all(np.diff(qs) >= 0) and np.all(np.diff(ks) <= 0)  # flipped axis


def test_rates_subcommand(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(
        json.dumps({"preset": "rates", "options": {"ns": [10, 20, 40, 80], "seeds": [0]}})
    )
    out = tmp_path / "rates"
    assert main(["rates", str(cfg), "--out", str(out)]) == 0
    with open(out / "rates.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["N", "lambda_final", "risk_value", "reference", "abs_error", "marginal_w2_max"]
    assert len(rows) == 4
    metrics = json.loads((out / "metrics.json").read_text())
    assert metrics["slope"] < 0


def test_solve_rejects_rates_preset(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"preset": "rates"}))
    assert main(["solve", str(cfg)]) == 1
    assert "rates" in capsys.readouterr().err
