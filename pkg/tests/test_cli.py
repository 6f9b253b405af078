import csv
import json
import subprocess
import sys

import pytest

from fracembed.cli import main, parse_grid


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


@pytest.mark.parametrize(
    "text, expected",
    [("1:3:3", [1.0, 2.0, 3.0]), ("0.5,2", [0.5, 2.0]), ("4:4:1", [4.0])],
)
def test_parse_grid(text, expected):
    assert parse_grid(text) == expected


@pytest.mark.parametrize("text", ["1:2", "1:2:0", "a:b:c"])
def test_parse_grid_errors(text):
    with pytest.raises(ValueError):
        parse_grid(text)


def test_minimize_nonconstant(tmp_path, capsys):
    out = tmp_path / "min.json"
    code = main(["minimize", "--n", "1", "--s", "0.5", "--q", "4", "--eps", "2.0",
                 "--modes", "16", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["is_constant"] is False
    assert doc["value"] < doc["eps2s"]
    assert doc["local_verdict_at_one"] == "Saddle"
    manifest = json.loads((tmp_path / "min.json.manifest.json").read_text())
    assert manifest["seed"] == 0 and manifest["command"] == "minimize"
    assert manifest["wall_time_s"] >= 0


def test_minimize_stdout(capsys):
    assert main(["minimize", "--eps", "0.5", "--modes", "8"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["is_constant"] is True


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"s": 0.5, "q": 4, "eps": 0.5, "modes": 8, "seed": 3}))
    out = tmp_path / "r.json"
    assert main(["minimize", "--config", str(cfg), "--eps", "2.0", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["eps"] == 2.0 and doc["is_constant"] is False
    manifest = json.loads((tmp_path / "r.json.manifest.json").read_text())
    assert manifest["seed"] == 3


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["minimize", "--config", str(cfg)]) == 2
    assert "bogus" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv, field",
    [
        (["minimize", "--s", "1.5"], "s"),
        (["minimize", "--eps", "-1"], "eps"),
        (["minimize", "--modes", "1"], "modes"),
        (["phase", "--q-grid", "1.5:3:2", "--modes", "4"], "q_grid"),
        (["phase", "--n", "1", "--s", "0.25", "--q-grid", "3:5:2", "--modes", "4"], "q_grid"),
    ],
)
def test_usage_errors(argv, field, capsys):
    assert main(argv) == 2
    assert field in capsys.readouterr().err


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 2


def test_phase_csv(tmp_path):
    out = tmp_path / "phase.csv"
    code = main(["phase", "--modes", "8", "--q-grid", "3:5:2", "--eps-grid", "0.5,2.5",
                 "--n-random-starts", "2", "--out", str(out)])
    assert code == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["q", "eps", "constant_global", "min_value", "eps_threshold_local"]
    assert len(rows) == 4
    assert rows[0]["constant_global"] == "True"
    # Floats are written losslessly.
    assert float(rows[0]["eps_threshold_local"]) == 3.141592653589793
    manifest = json.loads((tmp_path / "phase.csv.manifest.json").read_text())
    assert manifest["staircase_violations"] == 0


def test_bifurcation_csv(tmp_path):
    out = tmp_path / "bif.csv"
    assert main(["bifurcation", "--modes", "8", "--q", "4", "--eps-grid", "1:2:3",
                 "--n-random-starts", "1", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert [r["is_constant"] for r in rows] == ["True", "True", "False"]


def test_big_e_csv(tmp_path):
    out = tmp_path / "e.csv"
    assert main(["big-e", "--modes", "6", "--q-grid", "4", "--tol-factor", "0.1",
                 "--n-random-starts", "1", "--out", str(out)]) == 0
    (row,) = read_csv(out)
    assert float(row["big_e"]) <= float(row["eps_threshold_local"])


def test_bubble_csv(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bubble", "--n", "1", "--s", "0.25", "--widths", "0.1", "--out", str(out)]) == 0
    (row,) = read_csv(out)
    assert float(row["quotient"]) < float(row["constant_value"])


def test_verify_ineq(capsys):
    assert main(["verify-ineq", "--n-max", "6", "--s-step", "0.05"]) == 0
    assert "ALL LINKS HOLD" in capsys.readouterr().out


def test_make_domain_and_reuse(tmp_path):
    dom = tmp_path / "tri.json"
    assert main(["make-domain", "--kind", "triangle", "--degree", "8", "--modes", "6",
                 "--out", str(dom)]) == 0
    out = tmp_path / "m.json"
    assert main(["minimize", "--spectral-data", str(dom), "--s", "0.5", "--q", "3",
                 "--eps", "0.5", "--n-random-starts", "1", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["n_modes"] == 6


def test_bad_spectral_data(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dimension": 1}))
    assert main(["minimize", "--spectral-data", str(bad)]) == 2
    assert "schema" in capsys.readouterr().err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "fracembed", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip()
