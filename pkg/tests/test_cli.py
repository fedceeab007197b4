import csv
import io
import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest
from gmpy2 import mpq

from nlcs.cli import main, run_bench
from nlcs.constraint import parse_native
from nlcs.reduction import matrix_to_system

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
COLUMNS = ("file,n_constraints,n_vars,engine,status,conflict_size,t_decide_ms,t_conflict_ms,"
           "cells_or_branches,matrix_rows,matrix_cols")


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_decide_reciprocal_sat(tmp_path, capsys):
    f = write(tmp_path, "ex4.nlcs", "vars: x1 x2\nx1*x2 - 1 >= 0\nx1 - 3 <= 0\n")
    code, out = run(["decide", f, "--json"], capsys)
    assert code == 10
    res = json.loads(out.out)
    assert res["status"] == "sat"
    vals = [mpq(res["witness"][n]["value"]) for n in ("x1", "x2")]
    assert parse_native("vars: x1 x2\nx1*x2 - 1 >= 0\nx1 - 3 <= 0\n").satisfied_by(vals)


def test_decide_unsat_and_text_mode(tmp_path, capsys):
    f = write(tmp_path, "u.nlcs", "vars: x\nx > 0\nx < 0\n")
    code, out = run(["decide", f], capsys)
    assert code == 20 and out.out.strip() == "unsat"


def test_decide_malformed(tmp_path, capsys):
    f = write(tmp_path, "bad.nlcs", "vars: x\nx + * 2 > 0\n")
    code, out = run(["decide", f], capsys)
    assert code == 1
    assert "bad.nlcs:2:5:" in out.err


def test_usage_error_exit_1(capsys):
    with pytest.raises(SystemExit) as e:
        main(["decide"])
    assert e.value.code == 1


def test_unsupported_smt(tmp_path, capsys):
    f = write(tmp_path, "d.smt2", "(set-logic QF_NRA)\n(declare-fun x () Real)\n"
                                  "(assert (or (> x 0) (< x 0)))\n")
    code, out = run(["decide", f], capsys)
    assert code == 1 and "or" in out.err


def test_conflict_verify_exact(tmp_path, capsys):
    f = write(tmp_path, "h.nlcs", "vars: x y\nx > 1\ny > 1\nx*y < 1\nx + y > 5\n")
    code, out = run(["conflict", f, "--cover", "exact", "--verify"], capsys)
    res = json.loads(out.out)
    assert code == 20
    assert res["conflict"] == [1, 2, 3] and res["verified"] is True and res["method"] == "exact"


def test_conflict_pruned_first(tmp_path, capsys):
    f = write(tmp_path, "p.nlcs", "vars: x y\nx^2 < 0\ny > 0\n")
    for flag in ("on", "off"):
        code, out = run(["conflict", f, "--partial-cad", flag], capsys)
        assert json.loads(out.out)["conflict"] == [1]


def test_conflict_from_reduction(tmp_path, capsys):
    f = write(tmp_path, "r.nlcs", matrix_to_system([[0, 1], [1, 0]]).to_native())
    code, out = run(["conflict", f, "--engine", "cad"], capsys)
    assert len(json.loads(out.out)["conflict"]) == 2


def test_conflict_sat(tmp_path, capsys):
    f = write(tmp_path, "s.nlcs", "vars: x\nx > 0\n")
    code, out = run(["conflict", f], capsys)
    assert code == 10 and json.loads(out.out) == {"status": "sat", "conflict": None}


def test_exit_codes_match_json(tmp_path, capsys):
    codes = {"sat": 10, "unsat": 20, "unknown": 30}
    for text in ("vars: x\nx^2 - 2 = 0\n", "vars: x\nx^2 < 0\n", "vars: x y\nx*y > 1\ny < 0\n"):
        f = write(tmp_path, "e.nlcs", text)
        for engine in ("auto", "cad", "vs"):
            code, out = run(["decide", f, "--json", "--engine", engine], capsys)
            assert codes[json.loads(out.out)["status"]] == code


def test_var_order(tmp_path, capsys):
    f = write(tmp_path, "o.nlcs", "vars: x y\nx - 2*y > 0\ny > 1\n")
    code, out = run(["decide", f, "--json", "--var-order", "y,x", "--engine", "cad"], capsys)
    res = json.loads(out.out)
    vals = [mpq(res["witness"][n]["value"]) for n in ("x", "y")]
    assert code == 10 and parse_native("vars: x y\nx - 2*y > 0\ny > 1\n").satisfied_by(vals)


def test_bench_corpus(tmp_path):
    text = run_bench(CORPUS, timing=False)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert text.splitlines()[0] == COLUMNS
    assert len(rows) == 40
    for r in rows:
        assert r["status"] == ("sat" if "_sat" in r["file"] else "unsat")
        if r["status"] == "unsat":
            assert 1 <= int(r["conflict_size"]) <= int(r["n_constraints"])


def test_bench_empty_and_compare(tmp_path):
    assert run_bench(tmp_path) == COLUMNS + "\n"
    for name in ("p00_sat.nlcs", "p01_unsat.nlcs"):
        shutil.copy(CORPUS / name, tmp_path / name)
    (tmp_path / "junk.nlcs").write_text("vars: x\nx >\n")
    text = run_bench(tmp_path, compare=True)
    header = text.splitlines()[0].split(",")
    assert header[-2:] == ["t_plain_ms", "t_total_ms"]
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [r["file"] for r in rows] == ["junk.nlcs", "p00_sat.nlcs", "p01_unsat.nlcs"]
    assert rows[0]["status"] == "unknown"


def test_bench_deterministic_parallel():
    assert run_bench(CORPUS, timing=False) == run_bench(CORPUS, timing=False, jobs=3)


def test_console_script(tmp_path):
    f = write(tmp_path, "u.nlcs", "vars: x\nx > 0\nx < 0\n")
    exe = shutil.which("nlcs")
    cmd = [exe] if exe else [sys.executable, "-m", "nlcs.cli"]
    proc = subprocess.run(cmd + ["decide", f], capture_output=True, text=True)
    assert proc.returncode == 20


def test_hidden_reduction_check(capsys):
    code, out = run(["reduction-check", "--max-size", "2"], capsys)
    assert code == 0 and "round-trip" in out.out
