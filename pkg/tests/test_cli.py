from __future__ import annotations

import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from fsig.cli import Document, decimal12, emit, frac, load_problem, parse_problem, ProblemError, run
from fsig.selftest import problem_files

PROBLEMS = {p.name: str(p) for p in problem_files()}


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def strip_timing(text: str) -> dict:
    doc = json.loads(text)
    doc.pop("timing")
    return doc


def test_fraction_rendering():
    assert frac(Fraction(1, 2)) == {"num": "1", "den": "2"}
    assert decimal12(Fraction(1, 2)) == "0.500000000000"
    assert decimal12(Fraction(-1, 3)) == "-0.333333333333"
    assert decimal12(Fraction(2, 3)) == "0.666666666667"


def test_empty_document():
    doc = Document("fsig", None, {})
    assert json.loads(emit(doc, "json"))["records"] == []
    assert emit(doc, "csv") == "\n"


def test_csv_lengths_are_plain_integers():
    doc = Document("fsig", None, {})
    doc.records.append({"e": 3, "length": 125, "s_e": Fraction(1, 2)})
    assert emit(doc, "csv") == "e,length,s_e,s_e_decimal\n3,125,1/2,0.500000000000\n"


def test_fsig_json():
    code, out, _ = call("fsig", PROBLEMS["an-p5-n1.toml"], "--emax", "2")
    assert code == 0
    doc = json.loads(out)
    assert [r["length"] for r in doc["records"]] == [13, 313]
    assert doc["summary"]["extrapolated"] == {"num": "62", "den": "125"}
    assert doc["inputs"]["hypersurface"] == "x*y + 4*z^2"


def test_output_is_deterministic():
    a = call("fsig", PROBLEMS["an-p5-n1.toml"], "--emax", "2")[1]
    b = call("fsig", PROBLEMS["an-p5-n1.toml"], "--emax", "2")[1]
    c = call("fsig", PROBLEMS["an-p5-n1.toml"], "--emax", "2", "--threads", "2")[1]
    assert strip_timing(a) == strip_timing(b) == strip_timing(c)
    cut = a.index('"timing"')
    assert a[:cut] == b[:cut] == c[:cut]
    csv_a = call("fsig", PROBLEMS["an-p5-n1.toml"], "--emax", "2", "--format", "csv")[1]
    csv_b = call("fsig", PROBLEMS["an-p5-n1.toml"], "--emax", "2", "--format", "csv", "--threads", "2")[1]
    assert csv_a == csv_b


def test_curve_csv():
    code, out, _ = call("curve", PROBLEMS["an-p5-n1.toml"], "--emax", "2", "--grid", "0,1/4,1/2,3/4,1",
                        "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "e,t,t_decimal,exponent,length,s_e,s_e_decimal"
    rows = [l.split(",") for l in lines[1:] if l.startswith("2,")]
    values = [Fraction(r[5]) for r in rows]
    assert values == sorted(values, reverse=True) and len(values) == 5


def test_rounding_flag_changes_exponents():
    a = json.loads(call("fsig", PROBLEMS["regular-p5-n2-halfy.toml"], "--emax", "1")[1])
    b = json.loads(call("fsig", PROBLEMS["regular-p5-n2-halfy.toml"], "--emax", "1", "--rounding", "q")[1])
    assert a["records"][0]["length"] == 15
    assert b["records"][0]["length"] == 10
    assert b["inputs"]["rounding"] == "q"


@pytest.mark.parametrize("name", sorted(PROBLEMS))
def test_shipped_problems_run(name):
    prob = load_problem(PROBLEMS[name])
    command = prob.task["command"]
    code, out, err = call(command, PROBLEMS[name])
    assert code == 0, err
    assert json.loads(out)["status"] == "ok"


def test_diff_and_cover_commands():
    code, out, _ = call("diff", PROBLEMS["an-p5-n1.toml"], "--emax", "1", "--format", "csv")
    assert code == 0 and "coefficient_y" in out and "1/2" in out
    code, out, _ = call("verify-cover", PROBLEMS["an-p5-n1-cover.toml"], "--emax", "2")
    doc = json.loads(out)
    assert code == 0 and all(c["passed"] for c in doc["checks"])
    assert [r["gap"] for r in doc["records"]] == [{"num": "1", "den": "25"}, {"num": "1", "den": "625"}]


def test_selftest():
    code, out, _ = call("selftest")
    assert code == 0
    assert all(c["passed"] for c in json.loads(out)["checks"])


def test_check_failure_exits_2(tmp_path):
    src = open(PROBLEMS["an-p5-n1.toml"]).read().replace("expect = { num = 1, den = 2 }",
                                                          "expect = { num = 1, den = 3 }")
    path = tmp_path / "wrong.toml"
    path.write_text(src)
    code, out, err = call("fsig", str(path), "--emax", "2")
    assert code == 2
    assert json.loads(out)["status"] == "check-failed"
    assert "check failed" in err


def test_wrong_cover_exits_2(tmp_path):
    src = open(PROBLEMS["an-p5-n1-cover.toml"]).read().replace('z = "u*s"', 'z = "u^2"')
    path = tmp_path / "bad-cover.toml"
    path.write_text(src)
    code, _, err = call("verify-cover", str(path), "--emax", "1")
    assert code == 2 and "relations" in err


def test_toml_syntax_error_has_position(tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text("[ring]\np = = 5\nvars = [\"x\"]\n")
    code, out, err = call("fsig", str(path))
    assert code == 1 and out == ""
    assert "line" in err and "column" in err


def test_polynomial_error_has_line_and_column(tmp_path):
    path = tmp_path / "poly.toml"
    path.write_text('[ring]\np = 5\nvars = ["x", "y"]\nf = "x*y + w"\n')
    code, _, err = call("fsig", str(path))
    assert code == 1
    assert "poly.toml:4:" in err and "unknown identifier" in err


def test_missing_reference(tmp_path):
    path = tmp_path / "ref.toml"
    path.write_text('[ring]\np = 5\nvars = ["x"]\n[pair]\ndelta = "nope"\n')
    code, _, err = call("fsig", str(path))
    assert code == 1 and "'nope' is not defined" in err


def test_missing_file_and_bad_prime(tmp_path):
    assert call("fsig", str(tmp_path / "absent.toml"))[0] == 1
    path = tmp_path / "p6.toml"
    path.write_text('[ring]\np = 6\nvars = ["x"]\n')
    assert call("fsig", str(path))[0] == 1


def test_fractions_must_be_exact():
    with pytest.raises(ProblemError):
        parse_problem('[ring]\np = 5\nvars = ["x"]\n[divisors.D]\ncomponents = [{poly = "x", num = 0.5, den = 1}]\n')


def test_budget_exhaustion_is_partial():
    code, out, err = call("fsig", PROBLEMS["an-p5-n1.toml"], "--emax", "2", "--budget", "50")
    assert code == 1
    assert json.loads(out)["status"] == "partial"
    assert "budget" in err


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "fsig.cli", "fpt", PROBLEMS["fpt-xy-p2.toml"], "--emax", "1",
                           "--format", "csv"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "e,q,nu,ratio,ratio_decimal\n1,2,1,1/2,0.500000000000\n"
