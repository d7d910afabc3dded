from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from kummer import kst
from kummer.abelian import kummer_of, make_group, shift_involution, standard_twisted, twisted_kummer_of
from kummer.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main


@pytest.fixture
def files(tmp_path):
    """Write a few structures as KST files and return name -> path."""
    out = {}

    def put(name, K):
        p = tmp_path / f"{name}.kst"
        kst.dump(K, p)
        out[name] = str(p)

    put("k5", kummer_of(make_group([5])))
    put("k8", kummer_of(make_group([8])))
    put("kz4", kummer_of(make_group([4])))
    put("kz2", kummer_of(make_group([2])))
    put("kz3", kummer_of(make_group([3])))
    put("cube", kummer_of(make_group([4, 4, 4])))
    put("t30", twisted_kummer_of(standard_twisted(3, 0)))
    put("shift", twisted_kummer_of(shift_involution(6, 3)))
    put("trivial", kummer_of(make_group([])))
    out["q8"] = str(kst.fixture_path("q8.kst"))
    text = kst.dumps(kummer_of(make_group([5])))
    trunc = tmp_path / "truncated.kst"
    trunc.write_text("\n".join(text.splitlines()[:-2]) + "\n")
    out["truncated"] = str(trunc)
    out["tmp"] = tmp_path
    return out


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


# ---------------------------------------------------------------- build


def test_build_writes_verifiable_files(capsys, tmp_path):
    k = tmp_path / "k.kst"
    assert run(capsys, "build", "4,2", "--out", str(k))[0] == EXIT_OK
    assert kst.load(k) == kummer_of(make_group([4, 2]))
    assert run(capsys, "verify", str(k))[0] == EXIT_OK
    t = tmp_path / "t.kst"
    assert run(capsys, "build", "2,2", "--twisted", "01;10", "--out", str(t))[0] == EXIT_OK
    assert kst.load(t) == twisted_kummer_of(standard_twisted(1, 0))
    assert run(capsys, "verify", "--lemmas", str(t))[0] == EXIT_OK


def test_build_to_stdout(capsys):
    code, out, _ = run(capsys, "build", "4")
    assert code == EXIT_OK
    assert out == kst.dumps(kummer_of(make_group([4])))


@pytest.mark.parametrize("argv", [
    ["build", "0,2"],
    ["build", "x"],
    ["build", "2,2", "--twisted", "11;11"],
    ["build", "2,2", "--twisted", "0a;10"],
    ["build", "4", "--twisted", "1"],
])
def test_build_input_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_INPUT and out == "" and err.startswith("error: ")


# ---------------------------------------------------------------- verify


def test_verify_q8_reports_witness(capsys, files):
    code, out, _ = run(capsys, "verify", files["q8"])
    assert code == EXIT_FAIL
    assert out.splitlines() == ["A1 PASS", "A2 PASS", "A3 PASS", "A4 FAIL: witness i j -> k k; -1 -1 -> 1 1"]


def test_verify_with_lemmas(capsys, files):
    code, out, _ = run(capsys, "verify", "--lemmas", files["k5"])
    assert code == EXIT_OK
    assert out.splitlines() == [f"A{i} PASS" for i in range(1, 5)] + [f"L{i} PASS" for i in range(1, 8)]


def test_verify_q8_skips_lemmas(capsys, files):
    code, out, _ = run(capsys, "verify", "--lemmas", files["q8"])
    assert code == EXIT_FAIL and "L1" not in out


@pytest.mark.parametrize("which", ["truncated", "missing"])
def test_verify_input_errors(capsys, files, which):
    path = files["truncated"] if which == "truncated" else str(files["tmp"] / "nope.kst")
    code, out, err = run(capsys, "verify", path)
    assert code == EXIT_INPUT and out == ""
    assert "error:" in err


# ---------------------------------------------------------------- classify / recover


def test_classify_json_cube(capsys, files):
    code, out, _ = run(capsys, "classify", "--format", "json", files["cube"])
    assert code == EXIT_OK
    assert json.loads(out) == {"two_k_rank": 3, "two_torsion_rank": 3, "ind": 1, "kummer_of": "4,4,4", "twisted_of": None}


def test_classify_json_shift_and_trivial(capsys, files):
    out = run(capsys, "classify", "--format", "json", files["shift"])[1]
    assert json.loads(out) == {"two_k_rank": 3, "two_torsion_rank": 3, "ind": 0, "kummer_of": None, "twisted_of": {"a": 3, "b": 0}}
    out = run(capsys, "classify", "--format", "json", files["trivial"])[1]
    assert json.loads(out) == {"two_k_rank": 0, "two_torsion_rank": 0, "ind": None, "kummer_of": "", "twisted_of": {"a": 0, "b": 0}}


def test_classify_text(capsys, files):
    code, out, _ = run(capsys, "classify", files["kz4"])
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[:3] == ["two_torsion_rank: 1", "two_k_rank: 1", "ind: -"]
    assert "abelian group: 4" in lines and "twisted group: a=1 b=0" in lines
    assert "generator 1: group=yes twisted=yes" in lines


def test_classify_all_generators(capsys, files):
    out = run(capsys, "classify", "--all-generators", files["k5"])[1]
    assert [ln for ln in out.splitlines() if ln.startswith("generator")] == [
        "generator 1: group=yes twisted=no",
        "generator 2: group=yes twisted=no",
    ]


def test_classify_rejects_unverified(capsys, files):
    code, out, err = run(capsys, "classify", files["q8"])
    assert code == EXIT_FAIL and out == ""
    assert "not a Kummer structure" in err and "A4 FAIL" in err


@pytest.mark.parametrize("name, expected", [
    ("k5", ["abelian group: 5"]),
    ("kz4", ["abelian group: 4", "twisted group: a=1 b=0"]),
    ("t30", ["twisted group: a=3 b=0"]),
    ("trivial", ["abelian group: trivial", "twisted group: a=0 b=0"]),
])
def test_recover(capsys, files, name, expected):
    code, out, _ = run(capsys, "recover", files[name])
    assert code == EXIT_OK and out.splitlines() == expected


# ---------------------------------------------------------------- iso


def test_iso(capsys, files, tmp_path):
    tk = tmp_path / "tkc2sq.kst"
    assert run(capsys, "build", "2,2", "--twisted", "01;10", "--out", str(tk))[0] == EXIT_OK
    code, out, _ = run(capsys, "iso", files["kz4"], str(tk))
    assert code == EXIT_OK and out.strip() == "isomorphic"
    code, out, _ = run(capsys, "iso", files["kz2"], files["kz3"])
    assert code == EXIT_FAIL and out.strip() == "not isomorphic"


def test_iso_timeout(capsys, files):
    code, out, err = run(capsys, "iso", "--timeout", "0.01", files["cube"], files["t30"])
    assert code == EXIT_FAIL and out == "" and "time budget" in err


def test_iso_unverified(capsys, files):
    assert run(capsys, "iso", files["q8"], files["k5"])[0] == EXIT_FAIL


# ---------------------------------------------------------------- enumerate


def test_enumerate_stdout(capsys):
    code, out, _ = run(capsys, "enumerate", "--size", "2")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert sorted(r["kummer_of"] for r in rows) == ["2", "3"]


def test_enumerate_to_file(capsys, tmp_path):
    p = tmp_path / "census.csv"
    code, out, _ = run(capsys, "enumerate", "--size", "4", "--out", str(p))
    assert code == EXIT_OK and out == ""
    rows = list(csv.DictReader(p.open()))
    assert sorted(r["kummer_of"] for r in rows) == ["2,2", "6", "7"]


@pytest.mark.parametrize("size", ["0", "9"])
def test_enumerate_guard(capsys, size):
    assert run(capsys, "enumerate", "--size", size)[0] == EXIT_INPUT


# ---------------------------------------------------------------- string


@pytest.mark.parametrize("op, expected", [
    ("add", "gamma: 2,1"),
    ("sub", "delta: 1,0"),
])
def test_string_ops(capsys, files, op, expected):
    code, out, _ = run(capsys, "string", files["k5"], "--g", "1", "--alpha", "1,2", "--beta", "2,2", "--op", op)
    assert code == EXIT_OK and out.strip() == expected


def test_string_undefined(capsys, files):
    code, out, _ = run(capsys, "string", files["k8"], "--g", "1", "--alpha", "0,1", "--beta", "1,0", "--op", "oadd")
    assert code == EXIT_FAIL and out.strip() == "undefined"


@pytest.mark.parametrize("argv", [
    ["--g", "7", "--alpha", "0,1", "--beta", "0,1"],
    ["--g", "4", "--alpha", "0,4", "--beta", "0,4"],
    ["--g", "1", "--alpha", "0", "--beta", "0,1"],
    ["--g", "1", "--alpha", "0,9", "--beta", "0,1"],
    ["--g", "1", "--alpha", "0,3", "--beta", "0,1"],
])
def test_string_input_errors(capsys, files, argv):
    code, _, err = run(capsys, "string", files["k8"], *argv)
    assert code == EXIT_INPUT and err.startswith("error: --")


# ---------------------------------------------------------------- misc


def test_usage_errors(capsys):
    assert run(capsys)[0] == EXIT_INPUT
    assert run(capsys, "frobnicate")[0] == EXIT_INPUT
    assert run(capsys, "--help")[0] == EXIT_OK


def test_module_entry_point(tmp_path):
    p = subprocess.run([sys.executable, "-m", "kummer", "build", "3"], capture_output=True, text=True, check=False)
    assert p.returncode == 0
    assert kst.loads(p.stdout) == kummer_of(make_group([3]))
