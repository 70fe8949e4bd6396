import json
import subprocess
import sys

import pytest

from ellipsidist.cli import main
from ellipsidist.report import dumps


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_report(capsys):
    code, out, _ = run(capsys, "analyze", "--curve", "a=0,b=-2", "--seed", "3,5", "--n", "20000", "--k", "4")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == 1
    for key in ("curve", "seed", "schedule", "N", "weyl", "ks_uniform", "ks_mu", "mod1", "half_interval", "verdicts"):
        assert key in rep
    assert rep["N"] == 20000
    assert rep["verdicts"]["weyl"] == "equidistributed-evidence"
    assert rep["torsion"]["is_torsion"] is False


def test_exit_codes(capsys):
    assert run(capsys, "analyze", "--curve", "a=0,b=0", "--seed", "1,1")[0] == 3
    code, _, err = run(capsys, "period", "--curve", "a=0,b=0")
    assert code == 3 and "discriminant zero" in err
    assert run(capsys, "analyze", "--curve", "a=0,b=-2", "--seed-x", "3")[0] == 2
    assert run(capsys, "analyze", "--curve", "a=0,b=-2")[0] == 2
    assert run(capsys, "analyze", "--curve", "a=0,b=-2", "--seed", "3,4")[0] == 3
    assert run(capsys, "analyze", "--curve", "a=0,b=-2", "--seed", "3,5", "--schedule", "2n^2")[0] == 2
    assert run(capsys, "analyze", "--curve", "a=0,b=-2", "--seed", "3,5", "--n", "0")[0] == 2
    assert run(capsys, "lattice", "--tau", "0.5-1i", "--z", "0.1")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[curve]\na = 0\nb = -2\n\n[seed]\npoint = 3,5\n\n[run]\nn = 3000\nk = 3\n")
    code, out, _ = run(capsys, "analyze", "--config", str(cfg))
    assert code == 0 and json.loads(out)["N"] == 3000
    code, out, _ = run(capsys, "analyze", "--config", str(cfg), "--n", "500")
    assert code == 0 and json.loads(out)["N"] == 500
    assert run(capsys, "analyze", "--config", str(tmp_path / "missing.ini"))[0] == 2


def test_deterministic_json(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        args = ["analyze", "--curve", "a=-1,b=1", "--seed", "1,1", "--n", "5000", "--out", str(p)]
        assert run(capsys, *args)[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_sequence_csv(tmp_path, capsys):
    out = tmp_path / "seq.csv"
    code, _, _ = run(capsys, "sequence", "--curve", "0,-2", "--seed", "3,5", "--n", "10", "--out", str(out))
    assert code == 0
    raw = out.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == "n,s_n,component,x_n,frac_x_n"
    assert len(lines) == 11
    first = lines[1].split(",")
    assert first[0] == "1" and abs(float(first[3]) - 3) < 1e-9


def test_points_and_torsion(capsys):
    code, out, _ = run(capsys, "points", "--curve", "a=0,b=1", "--seed", "2,3", "--n", "6")
    assert code == 0
    rows = out.splitlines()
    assert rows[1] == "1,2,3" and rows[2] == "2,0,1" and rows[6] == "6,inf,inf"
    code, out, _ = run(capsys, "torsion", "--curve", "a=0,b=1", "--seed", "2,3")
    assert json.loads(out)["order"] == 6


def test_period_output(capsys):
    code, out, _ = run(capsys, "period", "--curve", "a=-1,b=0")
    rep = json.loads(out)
    assert code == 0
    assert abs(rep["curve"]["omega"] - 5.2441151086) < 1e-9
    assert rep["curve"]["component"] == "two-component"


def test_lattice_command(capsys):
    code, out, _ = run(capsys, "lattice", "--tau", "1i", "--z", "0.3", "--n", "1000", "--window", "2")
    rep = json.loads(out)
    assert code == 0 and rep["families"] == ["real-axis"]
    flagged = [e for e in rep["entries"] if e["k_integer"]]
    assert flagged and all(abs(e["modulus"] - 1) < 1e-9 for e in flagged)


def test_figures(tmp_path, capsys):
    figs = tmp_path / "figs"
    code, _, _ = run(
        capsys, "analyze", "--curve", "a=0,b=-2", "--seed", "3,5", "--n", "2000", "--figures", str(figs),
        "--cdf-csv", str(tmp_path / "cdf.csv"), "--out", str(tmp_path / "r.json"),
    )
    assert code == 0
    for name in ("orbit.png", "weyl.png", "cdf.png", "mod1.png"):
        data = (figs / name).read_bytes()
        assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert (tmp_path / "cdf.csv").read_text().startswith("x,F\n")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ellipsidist.cli", "torsion", "--curve", "a=0,b=-2", "--seed", "3,5"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["is_torsion"] is False


@pytest.mark.parametrize(
    "value,text",
    [(0.1, "0.10000000000000001"), (2.0, "2.0"), (float("inf"), '"inf"'), (1e300, "1.0000000000000001e+300")],
)
def test_float_format(value, text):
    assert dumps(value) == text
    assert dumps({"b": 1, "a": [True, None]}, indent=0).replace("\n", "") == '{"b": 1,"a": [true,null]}'
