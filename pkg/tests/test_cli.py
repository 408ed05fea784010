import json
import math

import pytest

from shiftlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_trajectory_csv(capsys):
    code, out, _ = run(capsys, "trajectory", "--family", "geometric", "--c", "1", "--member", "shift",
                       "--vector", "0:1", "--horizon", "64")
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "N,logNorm" and len(rows) == 65
    for line in rows[1:]:
        n, x = line.split(",")
        assert float(x) == pytest.approx(-int(n) * math.log(2), rel=1e-13)


def test_trajectory_validation_errors(capsys):
    assert run(capsys, "trajectory", "--horizon", "0")[0] == 2
    assert run(capsys, "trajectory", "--vector", "")[0] == 3
    assert run(capsys, "trajectory", "--vector", "abc")[0] == 2
    assert run(capsys, "trajectory", "--family", "geometric", "--c", "0.5")[0] == 2
    assert run(capsys, "trajectory", "--member", "sideways")[0] == 2


def test_tabulated_off_range_is_numerical_error(capsys, tmp_path):
    table = tmp_path / "t.txt"
    table.write_text("".join(f"{n} 0.0\n" for n in range(-3, 4)))
    code, _, err = run(capsys, "trajectory", "--family", "tabulated", "--table", str(table),
                       "--horizon", "10")
    assert code == 3 and "IndexOutOfTable" in err


def test_verify_commands(capsys):
    code, out, err = run(capsys, "verify", "L2-1", "--c", "1", "--kmax", "2")
    assert code == 0 and json.loads(out)["passed"] and "PASS" in err
    assert run(capsys, "verify", "L3-2", "--nmax", "1000")[0] == 0
    assert run(capsys, "verify", "R3-2", "--c", "1", "--M", "4096", "--nmax", "2048")[0] == 0
    assert run(capsys, "verify", "R3-2", "--M", "10", "--nmax", "9")[0] == 2
    assert run(capsys, "verify", "L2-1", "--M", "10")[0] == 2


def test_ljapunov_and_specradius(capsys):
    code, out, _ = run(capsys, "ljapunov", "--family", "krein", "--c", "1", "--member", "shift",
                       "--vector", "0:1", "--horizon", "511")
    d = json.loads(out)
    assert code == 0 and d["lambdaHat"] == pytest.approx(math.log(3), rel=1e-12)
    code, out, _ = run(capsys, "specradius", "--family", "hybrid", "--member", "adjinv", "--nmax", "1000")
    assert json.loads(out)["spectralRadius"] == pytest.approx(1.0069, abs=1e-4)
    code, out, _ = run(capsys, "specradius", "--family", "geometric", "--nmax", "4", "--window=-8:0")
    assert json.loads(out)["window"] == [-8, 0]


def test_membership_command(capsys):
    code, out, _ = run(capsys, "membership", "--family", "hybrid", "--member", "adjinv", "--set", "S",
                       "--horizon", "512", "--threshold", str(math.log(10)))
    d = json.loads(out)
    assert d["decision"] == "RefutedAtHorizon" and d["certificate"][-1][0] == 512
    assert run(capsys, "membership", "--set", "S+")[0] == 2
    code, out, _ = run(capsys, "membership", "--family", "krein", "--vector", "0:1", "--bottom", "",
                       "--set", "S+", "--a", "2", "--horizon", "511", "--format", "csv")
    assert code == 0 and out.startswith("N,value")


def test_continuum_commands(capsys):
    code, out, _ = run(capsys, "continuum", "group-check", "--case", "b", "--t", "1.5", "--tau", "0.5")
    assert code == 0 and json.loads(out)["maxResidual"] <= 1e-6
    code, out, _ = run(capsys, "continuum", "generator-check", "--case", "a")
    assert 1.8 <= json.loads(out)["ratio"] <= 2.2
    code, out, _ = run(capsys, "continuum", "propagate", "--case", "c", "--times", "0,0.5",
                       "--half-width", "1", "--step", "0.5")
    assert out.splitlines()[0] == "t,x,value"


def test_output_file_env_and_determinism(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SHIFTLAB_OUTPUT_DIR", str(tmp_path))
    argv = ["trajectory", "--family", "krein", "--c", "1", "--vector", "0:1,5:-2", "--horizon", "40",
            "--out", "traj.csv"]
    assert run(capsys, *argv)[0] == 0
    first = (tmp_path / "traj.csv").read_bytes()
    assert run(capsys, *argv)[0] == 0
    assert (tmp_path / "traj.csv").read_bytes() == first


def test_gnuplot_format(capsys):
    code, out, _ = run(capsys, "trajectory", "--horizon", "2", "--format", "dat")
    lines = out.splitlines()
    assert lines[0].startswith("#") and len(lines[1].split()) == 2


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nfamily = hybrid\nhorizon = 3\nmember = adjinv\n")
    code, out, _ = run(capsys, "--config", str(cfg), "trajectory")
    rows = out.splitlines()[1:]
    assert [float(r.split(",")[1]) for r in rows] == pytest.approx([math.log(2), math.log(3), math.log(4)])
    code, out, _ = run(capsys, "--config", str(cfg), "trajectory", "--horizon", "1")
    assert len(out.splitlines()) == 2
    cfg.write_text("horizon = lots\n")
    assert run(capsys, "--config", str(cfg), "trajectory")[0] == 2
