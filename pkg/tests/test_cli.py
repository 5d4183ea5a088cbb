import json
import subprocess
import sys

import pytest

from boxcorr import CorrelationQuery, SequenceSpec, count_box_tuples, generate
from boxcorr.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_kronecker_csv(capsys):
    code, out, _ = call(capsys, "gen", "--kind", "kronecker", "--alpha", "sqrt2", "--n", "1000", "--format", "csv")
    assert code == 0
    values = [line for line in out.splitlines() if not line.startswith("#")]
    assert len(values) == 1000
    pts = generate(SequenceSpec.kronecker("sqrt2"), 1000).points
    assert [float(v) for v in values] == pts.tolist()


def test_corr_regression_fixture(capsys):
    code, out, _ = call(capsys, "corr", "--kind", "random", "--seed", "7", "--n", "20000",
                        "--k", "2", "--beta", "1", "--s", "1.0")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "corr"
    row = doc["rows"][0]
    assert (row["raw_count"], row["R"], row["target"]) == (40502, 2.0251, 2.0)
    assert "timing" not in doc


def test_verify_thm_gaps(capsys):
    code, out, _ = call(capsys, "verify", "thm-gaps", "--kind", "kronecker", "--alpha", "golden", "--k", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "pass"
    assert doc["rows"]


def test_round_trip_through_file(capsys, tmp_path):
    f = tmp_path / "pts.csv"
    assert call(capsys, "gen", "--kind", "random", "--seed", "3", "--n", "5000", "--out", str(f))[0] == 0
    _, direct, _ = call(capsys, "corr", "--kind", "random", "--seed", "3", "--n", "5000", "--s", "0.5,2", "--beta", "0.7")
    _, loaded, _ = call(capsys, "corr", "--input", str(f), "--s", "0.5,2", "--beta", "0.7")
    assert json.loads(direct)["rows"] == json.loads(loaded)["rows"]


@pytest.mark.parametrize("argv", [
    ["corr", "--kind", "random", "--seed", "5", "--n", "30000", "--s", "1,0.5"],
    ["sweep", "--kind", "vdc", "--base", "3", "--s", "1", "--beta", "0.5", "--grid", "geom:100:10000:5", "--format", "csv"],
    ["gh", "--kind", "kronecker", "--alpha", "golden", "--n", "5000", "--s", "1,1"],
    ["verify", "thm-box", "--kind", "random", "--seed", "2", "--s", "1", "--grid", "1000,5000"],
])
def test_byte_determinism_across_threads(capsys, argv):
    outs = {call(capsys, *argv, "--threads", str(t))[1] for t in (1, 2, 7)}
    assert len(outs) == 1


def test_csv_layout(capsys):
    _, out, _ = call(capsys, "sweep", "--kind", "kronecker", "--alpha", "sqrt2", "--beta", "0.5", "--s", "1",
                     "--grid", "100,1000", "--format", "csv")
    lines = out.splitlines()
    meta = [l for l in lines if l.startswith("#")]
    body = [l for l in lines if not l.startswith("#")]
    assert meta and lines[: len(meta)] == meta
    assert body[0] == "N,raw_count,R,target,abs_error"
    assert [int(r.split(",")[0]) for r in body[1:]] == [100, 1000]


def test_timing_only_on_request(capsys):
    _, out, _ = call(capsys, "corr", "--kind", "vdc", "--n", "100", "--s", "1", "--timing")
    assert "timing" in json.loads(out)
    _, out, _ = call(capsys, "corr", "--kind", "vdc", "--n", "100", "--s", "1", "--timing", "--format", "csv")
    assert "# timing_seconds=" in out


def test_other_commands(capsys):
    code, out, _ = call(capsys, "discrepancy", "--kind", "kronecker", "--n", "100")
    assert code == 0 and json.loads(out)["rows"][0]["d_star"] > 0
    code, out, _ = call(capsys, "gaps", "--kind", "vdc", "--include-zero", "--n", "16")
    assert json.loads(out)["distinct"] == 1
    code, out, _ = call(capsys, "verify", "thm-gh", "--kind", "random", "--seed", "4", "--s", "1", "--grid", "2000,20000")
    assert code == 0 and json.loads(out)["verdict"] == "pass"


def test_usage_errors_exit_2(capsys):
    for argv in (["corr", "--kind", "random", "--n", "3", "--s", "1", "--k", "3"],
                 ["corr", "--kind", "random", "--n", "100", "--s", "1", "--beta", "1.5"],
                 ["corr", "--kind", "random", "--n", "100", "--s", "-1"],
                 ["sweep", "--kind", "random", "--s", "1", "--grid", "100,50"],
                 ["bogus"]):
        code, _, err = call(capsys, *argv)
        assert code == 2, argv
        assert "usage:" in err


def test_domain_errors_exit_1(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("0.1\nabc\n")
    code, out, err = call(capsys, "corr", "--input", str(f), "--s", "1")
    assert code == 1
    assert "line 2" in err and out == ""
    code, _, err = call(capsys, "corr", "--input", str(tmp_path / "missing"), "--s", "1")
    assert code == 1


def test_env_thread_fallback(monkeypatch, capsys):
    argv = ["corr", "--kind", "random", "--seed", "1", "--n", "5000", "--s", "2"]
    ref = call(capsys, *argv)[1]
    monkeypatch.setenv("BOXCORR_THREADS", "3")
    assert call(capsys, *argv)[1] == ref


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "boxcorr", "corr", "--kind", "vdc", "--n", "64", "--s", "1"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["rows"][0]["N"] == 64
