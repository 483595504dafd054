import json
import subprocess
import sys
from pathlib import Path

import pytest

from asmcurve.cli import main

SPECS = Path(__file__).resolve().parents[1] / "specs"


def run(*argv):
    proc = subprocess.run([sys.executable, "-m", "asmcurve", *argv], capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def spec(name):
    return str(SPECS / f"{name}.json")


def test_verify_passes_and_reports(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", spec("asm_p3"), "--suite", "genus", "--suite", "autgroup", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["schema"] == 1 and rep["command"] == "verify"
    assert rep["curve"]["genus"] == 4
    names = {c["name"]: c["status"] for c in rep["checks"]}
    assert names["genus_dimension"] == names["closure_order"] == "pass"
    assert all("timing" in c for c in rep["checks"])


def test_no_timing_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify", spec("asm_p2e2"), "--suite", "galois-points", "--no-timing", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert all("timing" not in c for c in json.loads(a.read_text())["checks"])


def test_exit_codes():
    code, _, err = run("verify", spec("bad_c0"))
    assert code == 2 and "ZeroConstant" in err
    # the generated group misses half of the plane stabilizer of this curve
    code, out, _ = run("verify", spec("mixed_p3"), "--suite", "exhaustive", "--no-timing")
    assert code == 1
    (check,) = json.loads(out)["checks"]
    assert check["status"] == "fail" and check["data"]["order"] == 36
    code, out, _ = run("verify", spec("mixed_p2e2"), "--suite", "exhaustive", "--no-timing")
    assert code == 3
    assert json.loads(out)["checks"][0]["data"]["error"] == "SearchBudgetExceeded"


def test_field_budget_flag():
    code, _, err = run("verify", spec("mixed_p2e2"), "--max-field-bits", "4")
    assert code == 3 and "FieldTooLarge" in err


def test_chord_informational_when_k_equals_e(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", spec("asm_p3"), "--suite", "galois-lines", "--no-timing", "--out", str(out)]) == 0
    checks = {c["name"]: c for c in json.loads(out.read_text())["checks"]}
    assert checks["galois_lines"]["status"] == "skip"
    assert checks["chord_rejected"]["status"] == "skip"


def explore(*argv):
    code, out, err = run("explore", *argv)
    assert code == 0, err
    return json.loads(out)["results"]


def test_explore_ord():
    res = explore(spec("asm_p3"), "--ord", "f=y-b", "--at", "omega1:b")
    assert [r["ord"] for r in res] == [3, 3, 3]
    res = explore(spec("asm_p3"), "--ord", "f=1/(y-b)", "--at", "omega1:1")
    assert res[0]["ord"] == -3
    res = explore(spec("asm_p3"), "--ord", "f=x,i=2", "--at", "omega2:0")
    assert res[0]["ord"] == 6
    res = explore(spec("asm_p3"), "--ord", "f=x^2*y+1", "--at", "omega1:0")
    assert res[0]["ord"] == 0


def test_explore_gaps_and_group():
    (g,) = explore(spec("asm_p3"), "--gaps", "--at", "omega1:0")
    assert g["gaps"] == [1, 2, 4, 5] and 3 in g["nongaps_upto_2g"] and g["q_is_nongap"]
    (grp,) = explore(spec("asm_p3"), "--list-group")
    assert grp["order"] == 36 and len(grp["elements"]) == 36


def test_explore_series():
    (s,) = explore(spec("asm_p3"), "--series", "6", "--at", "omega1:0")
    assert s["parameter"] == "1/x" and s["x"]["val"] == -1 and s["y"]["val"] == 3


@pytest.mark.parametrize("argv", [
    ["explore", "SPEC", "--ord", "f=z", "--at", "omega1:0"],
    ["explore", "SPEC", "--ord", "f=y", "--at", "omega1:7"],
    ["explore", "SPEC", "--gaps"],
])
def test_explore_bad_input(argv):
    argv = [spec("asm_p3") if a == "SPEC" else a for a in argv]
    code, _, _ = run(*argv)
    assert code == 2
