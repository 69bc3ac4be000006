import json
import subprocess
import sys

import numpy as np
import pytest

from levydyn.cli import build_parser, run
from levydyn.evolution import quad_lorentz_density


def read_csv(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), np.array([[float(v) for v in line.split(",")] for line in lines[1:]])


def test_evolve_writes_figure_one_series(tmp_path):
    out = tmp_path / "fig1.csv"
    assert run(["evolve", "--initial", "quad_lorentz:1", "--symbol", "stable:1", "--times", "0,1,2,5", "--out", str(out), "--xmax", "5"]) == 0
    header, data = read_csv(out)
    assert header == ["x", "t", "rho"]
    assert sorted(set(data[:, 1])) == [0.0, 1.0, 2.0, 5.0]
    assert np.max(np.abs(data[:, 2] - quad_lorentz_density(data[:, 0], data[:, 1]))) < 1e-6


def test_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["current", "--initial", "gaussian:1", "--times", "1,2", "--n", "1024", "--L", "64", "--xmax", "4"]
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_values_carry_full_precision(tmp_path):
    out = tmp_path / "k.csv"
    run(["kernel", "--family", "cauchy", "--times", "1", "--xmin", "0.1", "--xmax", "0.1", "--npts", "2", "--out", str(out)])
    _, data = read_csv(out)
    assert data[0, 2] == 1 / (np.pi * 1.01)


def test_json_output_has_metadata(tmp_path):
    out = tmp_path / "k.json"
    assert run(["kernel", "--family", "stable", "--mu", "1.5", "--npts", "5", "--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["version"] == "0.1.0" and doc["columns"] == ["x", "t", "k"]
    assert doc["config"]["mu"] == 1.5 and "quadrature_abs_error" in doc["error_estimates"]
    assert len(doc["data"]) == 5


def test_config_file_supplies_defaults(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"family": "heat", "D": 2.0, "times": [0.5], "npts": 3}))
    out = tmp_path / "o.csv"
    assert run(["kernel", "--config", str(cfg), "--out", str(out)]) == 0
    _, data = read_csv(out)
    assert data.shape == (3, 3) and np.all(data[:, 1] == 0.5)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"nonsense": 1}))
    with pytest.raises(SystemExit) as exc:
        run(["kernel", "--config", str(bad)])
    assert exc.value.code == 2


def test_propagate_table(tmp_path):
    out = tmp_path / "p.csv"
    assert run(["propagate", "--family", "salpeter_1d", "--m", "1", "--eps", "0.1", "--npts", "11", "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert header == ["x", "t", "re", "im"] and data.shape == (11, 4)


def test_figure_four_and_png(tmp_path):
    out = tmp_path / "fig4.csv"
    assert run(["figure", "--id", "4", "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert header == ["r", "t", "r2rho"]
    assert (tmp_path / "fig4.png").stat().st_size > 1000
    t5 = data[data[:, 1] == 5.0]
    assert t5[np.argmax(t5[:, 2]), 0] == pytest.approx(5.0, abs=0.1)


def test_domain_errors_exit_one(capsys):
    assert run(["kernel", "--family", "stable", "--mu", "2.5"]) == 1
    assert "stability index" in capsys.readouterr().err
    assert run(["propagate", "--family", "cauchy_1d", "--eps", "0"]) == 1


def test_bad_flags_exit_two():
    with pytest.raises(SystemExit) as exc:
        run(["evolve", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["figure", "--id", "9"])
    assert exc.value.code == 2


def test_threads_flag(tmp_path, monkeypatch):
    monkeypatch.delenv("LEVYDYN_THREADS", raising=False)
    out = tmp_path / "t.csv"
    assert run(["evolve", "--n", "1024", "--L", "64", "--times", "1", "--threads", "2", "--out", str(out)]) == 0


def test_parser_lists_all_subcommands():
    text = build_parser().format_help()
    for name in ("kernel", "propagate", "evolve", "current", "figure", "selftest"):
        assert name in text


def test_selftest_passes_as_module():
    proc = subprocess.run([sys.executable, "-m", "levydyn", "selftest"], capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "FAIL" not in proc.stdout
