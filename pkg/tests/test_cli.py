import json
import math
import subprocess
import sys

import pytest

from hypsob.cli import NaNError, encode, render, run

CHI = '{"type": "step", "breakpoints": [1.0], "values": [1.0]}'


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_norm(capsys):
    code, out, _ = call(capsys, "norm", "--space", '{"space": "Lp", "p": 2}', "--fn", CHI)
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == 1.0 and doc["certified"] == "exact"


def test_apply_rows(capsys):
    code, out, _ = call(capsys, "apply", "--op", "T", "--m", "1", "--n", "3", "--fn", CHI, "--grid", "0.5", "4", "3")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [r["t"] for r in rows] == pytest.approx([0.5, math.sqrt(2), 4.0])
    assert rows[-1]["value"] == 0.0


def test_target_lz(capsys):
    code, out, _ = call(capsys, "target", "--m", "2", "--lz", "1", "1", "0", "0")
    assert code == 0
    doc = json.loads(out)
    assert doc["row"] == "Z2" and doc["result"]["space"] == "Z2" and doc["n"] == 3


def test_target_nonexistence(capsys):
    code, out, _ = call(capsys, "target", "--m", "3", "--n", "5", "--lz", "inf", "inf", "0", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"] is None and doc["certificate"]["failed"] == "existence_condition"


def test_verify_reduction(capsys):
    code, out, _ = call(capsys, "verify", "--suite", "reduction", "--m", "3", "--n", "5", "--x", "L1",
                        "--family-size", "20", "--seed", "7")
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] and doc["parameters"]["row"] == "Z1"


def test_determinism(capsys):
    argv = ["verify", "--suite", "reduction", "--m", "2", "--n", "3", "--x", "L2", "--family-size", "15", "--seed", "3"]
    _, a, _ = call(capsys, *argv)
    _, b, _ = call(capsys, *argv)
    assert a == b


def test_csv_and_out(tmp_path, capsys):
    path = tmp_path / "rows.csv"
    code = run(["apply", "--op", "T", "--m", "2", "--n", "3", "--fn", CHI, "--format", "csv", "--out", str(path)])
    assert code == 0 and capsys.readouterr().out == ""
    lines = path.read_text().splitlines()
    assert lines[0] == "t,value" and len(lines) == 62


@pytest.mark.parametrize("argv,code", [
    (["norm", "--space", "{bad json", "--fn", CHI], 2),
    (["norm", "--space", '{"space": "LZ", "p": "inf", "q": "inf", "A": [1, 0]}', "--fn", CHI], 2),
    (["target", "--m", "4", "--n", "3", "--lz", "2", "2", "0", "0"], 2),
    (["bogus"], 2),
    (["verify", "--suite", "equivalence", "--pair", "nu~sigma", "--m", "3", "--n", "5", "--x", "Linf"], 3),
    (["verify", "--suite", "reduction", "--m", "3", "--n", "5", "--x", "Linf", "--family-size", "5"], 3),
])
def test_exit_codes(capsys, argv, code):
    got, out, err = call(capsys, *argv)
    assert got == code and out == ""
    assert "error" in json.loads(err)


def test_nan_is_rejected():
    with pytest.raises(NaNError):
        render({"x": float("nan")}, "json")
    assert encode({"x": math.inf}) == {"x": "inf"}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hypsob", "target", "--m", "1", "--lz", "2", "2", "0", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["row"] == "v1"
