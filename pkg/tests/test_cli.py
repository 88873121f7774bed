import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from disk_fronts.cli import main
from disk_fronts.io import parse_config


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_front_csv(capsys):
    code, out, _ = run(["front", "--a", "0", "--t", "1", "--n-alpha", "64"], capsys)
    assert code == 0
    data = rows(out)
    assert list(data[0]) == ["alpha", "x", "y", "reflections"]
    assert len(data) == 64
    for r in data:
        assert math.hypot(float(r["x"]), float(r["y"])) == pytest.approx(1.0, abs=1e-9)


def test_front_large_alpha_grid(tmp_path, capsys):
    out = tmp_path / "front.csv"
    code, _, _ = run(["front", "--a", "0.5", "--t", "10", "--n-alpha", "100000", "-o", str(out)],
                     capsys)
    assert code == 0
    assert len(out.read_text().splitlines()) == 100001


@pytest.mark.parametrize("args, message", [
    (["front", "--a", "1.5", "--t", "1"], "a must be in [0,1)"),
    (["stationary-check", "--t", "0"], "t must be positive"),
    (["front", "--t", "1"], "missing required option --a"),
    (["front", "--a", "x", "--t", "1"], "invalid value for --a"),
    (["nonsense"], "invalid choice"),
    (["front", "--a", "0.1", "--t", "1", "--format", "xml"], "format must be csv or json"),
])
def test_errors_are_single_line(args, message, capsys):
    code, out, err = run(args, capsys)
    assert code != 0
    assert out == ""
    assert err.count("\n") == 1
    assert message in err


def test_density_center_source_model_zero(capsys):
    code, out, _ = run(["density", "--a", "0", "--t", "10"], capsys)
    assert code == 0
    data = rows(out)
    assert list(data[0]) == ["r_lo", "r_hi", "simulated", "model", "rel_err"]
    assert [float(r["model"]) for r in data] == [0.0] * 10
    assert data[3]["r_lo"] == "0.3"


def test_density_errors_shrink(capsys):
    errs = []
    for t in ("100", "400"):
        _, out, _ = run(["density", "--a", "0.5", "--t", t], capsys)
        errs.append(np.array([float(r["rel_err"]) for r in rows(out)]))
    assert np.nanmax(errs[1]) < np.nanmax(errs[0])


def test_series_report_and_plot(tmp_path, capsys):
    out = tmp_path / "s.csv"
    plot = tmp_path / "s.gp"
    code, report, _ = run(["series", "--a", "0", "--t-max", "10", "-o", str(out),
                           "--plot", str(plot)], capsys)
    assert code == 0
    data = rows(out.read_text())
    assert list(data[0]) == ["t", "sim", "model", "lambda_t", "residual"]
    fields = dict(line.split("=", 1) for line in report.splitlines())
    assert float(fields["period"]) == pytest.approx(2.0, abs=0.05)
    script = plot.read_text()
    assert str(out) in script and script.startswith("set datafile separator ','")


def test_series_half_source_flags_degenerate(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, report, _ = run(["series", "--a", "0.5", "--t-min", "2", "--t-max", "30", "--dt",
                           "0.1", "-o", str(out)], capsys)
    assert code == 0
    assert "fit_ratio=degenerate: use boundedness test" in report
    assert "residual_max=" in report


def test_series_report_on_stderr_when_csv_on_stdout(capsys):
    code, out, err = run(["series", "--a", "0.3", "--t-max", "3", "--dt", "0.5"], capsys)
    assert code == 0
    assert out.startswith("t,sim,model,lambda_t,residual\n")
    assert "fit_ratio=" in err


def test_json_mirrors_csv(capsys):
    base = ["model", "--a", "0.3", "--t-min", "5", "--t-max", "6", "--dt", "0.5"]
    _, csv_out, _ = run(base, capsys)
    _, json_out, _ = run(base + ["--format", "json"], capsys)
    doc = json.loads(json_out)
    assert doc["columns"] == ["t", "lambda_t", "series", "integral_xi", "integral_alpha"]
    assert doc["meta"]["a"] == 0.3 and doc["meta"]["N"] == 10 and "version" in doc["meta"]
    table = rows(csv_out)
    assert [float(r["series"]) for r in table] == doc["data"]["series"]


def test_config_file_overridden_by_flags(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# front settings\na = 0.5\nt = 1\nn-alpha = 8\n")
    _, out, _ = run(["front", "--config", str(cfg)], capsys)
    assert len(rows(out)) == 8
    _, out, _ = run(["front", "--config", str(cfg), "--n-alpha", "4"], capsys)
    assert len(rows(out)) == 4
    cfg.write_text("bogus = 1\n")
    code, _, err = run(["front", "--config", str(cfg), "--a", "0", "--t", "1"], capsys)
    assert code != 0 and "unknown config key" in err


def test_parse_config():
    assert parse_config("a=0.3\n\n# c\nt-max = 5 # trailing\n") == {"a": "0.3", "t_max": "5"}
    with pytest.raises(ValueError):
        parse_config("just words")


def test_deterministic_output(capsys):
    args = ["density", "--a", "0.6", "--t", "12"]
    first = run(args, capsys)[1]
    assert run(args, capsys)[1] == first


def test_stationary_check_default(capsys):
    code, out, _ = run(["stationary-check"], capsys)
    fields = dict(line.split("=", 1) for line in out.splitlines())
    assert code == 0
    assert -1.7 <= float(fields["bessel_slope"]) <= -1.3
    assert fields["result"] == "pass"


def test_stationary_check_front_phase(capsys):
    code, out, _ = run(["stationary-check", "--family", "front-phase", "--a", "0.3"], capsys)
    assert code == 0
    assert "bounded=true" in out


def test_console_script_and_thread_env(tmp_path):
    env_run = subprocess.run(
        [sys.executable, "-m", "disk_fronts.cli", "front", "--a", "0.2", "--t", "3",
         "--n-alpha", "5"], capture_output=True, text=True,
        env={"DISK_FRONTS_THREADS": "2", "PATH": ""})
    assert env_run.returncode == 0
    bad = subprocess.run(
        [sys.executable, "-m", "disk_fronts.cli", "front", "--a", "0.2", "--t", "3"],
        capture_output=True, text=True, env={"DISK_FRONTS_THREADS": "many", "PATH": ""})
    assert bad.returncode != 0 and "DISK_FRONTS_THREADS" in bad.stderr


def test_parallel_series_matches_serial():
    from disk_fronts.analysis import simulated_lengths
    t = np.linspace(1.0, 6.0, 12)
    assert np.array_equal(simulated_lengths(0.4, t, n_jobs=2), simulated_lengths(0.4, t, n_jobs=1))
