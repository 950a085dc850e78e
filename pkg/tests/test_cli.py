import csv
import json
import subprocess
import sys

import pytest

from ellbethe.cli import DUMP_OBJECTS, ConfigError, main, parse_config
from ellbethe.reports import CSV_HEADER

GOOD = """\
# two spin-1/2 sites at eta = 1/4
tau_re = 0.3
tau_im = 1.1
eta_num = 1
eta_den = 4
spins = 1/2, 1/2
z_re = 0.11, -0.17
z_im = 0.03, 0.05
witness = 1, 0, 1
"""


def test_verify_writes_reports(tmp_path, capsys):
    assert main(["verify", "theta", "--out", str(tmp_path)]) == 0
    rows = list(csv.reader((tmp_path / "theta_residuals.csv").open()))
    assert tuple(rows[0]) == CSV_HEADER
    assert len(rows) > 1 and all(r[-1] == "true" for r in rows[1:])
    report = json.loads((tmp_path / "theta_report.json").read_text())
    assert report["passed"] is True
    assert "checks passed" in capsys.readouterr().out


def test_verify_with_config_file(tmp_path):
    cfg = tmp_path / "desk.cfg"
    cfg.write_text(GOOD)
    assert main(["verify", "theta", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "theta_report.json").exists()


def test_malformed_config_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(GOOD.replace("eta_den = 4", "eta_den = four"))
    assert main(["verify", "theta", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert f"{cfg}:5:" in err and "eta_den" in err


def test_missing_config_file(tmp_path):
    assert main(["verify", "theta", "--config", str(tmp_path / "nope.cfg"), "--out", str(tmp_path)]) == 2


def test_unknown_object_and_suite(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["dump", "not_an_object", "--out", str(tmp_path / "x.json")])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "everything"])
    assert exc.value.code == 2


@pytest.mark.parametrize("name", DUMP_OBJECTS)
def test_dump_objects(tmp_path, name):
    out = tmp_path / f"{name}.json"
    assert main(["dump", name, "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["object"] == name
    if name == "baxter_r":
        assert len(data["matrix"]) == 4 and len(data["matrix"][0]) == 4
    if name == "bethe_basis":
        assert data["count"] == 8 == data["r"] * data["weight_zero_dim"]
    if name == "solution":
        assert data["active_points"] == [-1, 0]


def test_dump_psi_roots(tmp_path):
    out = tmp_path / "psi.json"
    assert main(["dump", "psi", "--out", str(out), "--t", "0.1+0.02i"]) == 0
    assert json.loads(out.read_text())["t"] == [[0.1, 0.02]]


def test_verify_is_byte_identical(tmp_path):
    for d in ("a", "b"):
        assert main(["verify", "bethe", "--seed", "7", "--out", str(tmp_path / d)]) == 0
    for f in ("bethe_report.json", "bethe_residuals.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("tau_re = 0.3\nfoo = 1\n", 2, "unknown key"),
        ("tau_re = 0.3\ntau_re = 0.4\n", 2, "duplicate"),
        ("spins\n", 1, "key = value"),
        ("spins = 1/2, 1/2, 1/2\n", 1, "z_re"),
        ("eta_num = 2\neta_den = 4\n", 1, "lowest terms"),
        ("witness = 1, 0\n", 1, "three integers"),
        ("kappa = 0.1+0.2j\nwitness = 1, 0, 1\n", 1, "differs"),
        ("kappa = 0.1-0.2j\n", 1, "Im kappa"),
        ("window = 3, 1\n", 1, "window"),
        ("precision = quad\n", 1, "precision"),
        ("tolerances = theta: 1e-9, bogus: 1\n", 1, "bogus"),
    ],
)
def test_config_errors(text, line, fragment):
    with pytest.raises(ConfigError, match=fragment) as exc:
        parse_config(text, "t.cfg")
    assert exc.value.line == line


def test_kappa_without_witness():
    run = parse_config("kappa = 0.19+0.83j\n")
    assert run.witness is None and run.chain.kappa == 0.19 + 0.83j


def test_config_overrides():
    run = parse_config(GOOD + "tolerances = theta: 1e-9\nseed = 5\n", seed=11, mode="extended")
    assert run.seed == 11 and run.precision == "extended" and run.tol("theta") == 1e-9
    assert run.chain.kappa == pytest.approx(0.8 + 1.1j)


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "ellbethe", "dump", "bethe_basis", "--out", str(tmp_path / "b.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
