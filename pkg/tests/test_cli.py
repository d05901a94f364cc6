import io
import subprocess
import sys
from fractions import Fraction

import pytest

from cfol.cli import DOMAIN, OK, TIMEOUT, USAGE, main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def model_file(tmp_path, M2):
    p = tmp_path / "two.model"
    p.write_text(M2.dumps())
    return str(p)


def test_validate_bundled_and_file(model_file):
    assert run("validate", "--model", "twopoint") == (OK, "")
    assert run("validate", "--model", model_file) == (OK, "")


def test_validate_reports_violations(tmp_path, M2):
    p = tmp_path / "bad.model"
    p.write_text(M2.dumps().replace("dist a b 1/2", "dist a b 2/1"))
    code, out = run("validate", "--model", str(p))
    assert code == DOMAIN and "diameter" in out


def test_eval():
    assert run("eval", "(num 1 1)") == (OK, "1/2\n")
    assert run("eval", "(sup 0 (pred Q (var 0)))") == (OK, "3/4\n")
    assert run("eval", "(pred Q (var 0))", "--assign", "0=b") == (OK, "3/4\n")


def test_parse_normalizes_and_expands():
    code, out = run("parse", "(or (pred d (var 0) (var 1))  (num 0 0))")
    assert code == OK and out == "(or (pred d (var 0) (var 1)) (num 0 0))\n"
    code, out = run("parse", "--expand", "(num 0 0)")
    assert out == "(sup 0 (pred d (var 0) (var 0)))\n"


def test_parse_error_is_domain_error(capsys):
    code, _ = run("parse", "(sup 0 (pred d (var 0) (var 1))")
    assert code == DOMAIN
    assert "unbalanced" in capsys.readouterr().err


def test_usage_errors():
    assert run()[0] == USAGE
    assert run("eval")[0] == USAGE
    assert run("query", "--model", "twopoint", "--pred", "Q", "--terms", "c_a", "--prec", "-1")[0] == USAGE
    assert run("validate", "--model", "twopoint", "--frobnicate")[0] == USAGE


def test_query_distance():
    code, out = run("query", "--model", "twopoint", "--pred", "d", "--terms", "c_a;c_b", "--prec", "1")
    assert code == OK
    assert abs(Fraction(out.splitlines()[0]) - Fraction(1, 2)) <= Fraction(1, 4)


def test_query_timeout():
    code, _ = run("query", "--model", "twopoint", "--pred", "Q", "--terms", "c_b", "--prec", "1",
                  "--stage-budget", "5")
    assert code == TIMEOUT


def test_query_stats_to_stdout():
    code, out = run("query", "--model", "twopoint", "--pred", "Q", "--terms", "c_a", "--prec", "0",
                    "--stats")
    assert code == OK and "oracle calls" in out and "name reads" in out


def test_check_proof(tmp_path):
    p = tmp_path / "p.proof"
    p.write_text("axiom XI | (pred d (var 0) (var 0))\n"
                 "gen 1 0 | (sup 0 (pred d (var 0) (var 0)))\n")
    code, out = run("check-proof", "--proof", str(p), "--model", "twopoint")
    assert code == OK and out.startswith("accept")
    p.write_text("mp 1 2 | (pred d (var 0) (var 0))\n")
    code, out = run("check-proof", "--proof", str(p))
    assert code == DOMAIN and "line 1" in out


def test_make_name_prefix(tmp_path):
    name = tmp_path / "x.name"
    assert run("make-name", "--model", "twopoint", "--length", "20", "--out", str(name))[0] == OK
    # phi_0 = d(c_a, c_a) has degree 0 and phi_1 = ¬phi_0 degree 1 (code <1, 0> = 1):
    # X(0) = <<0,0>, 0> = 0, X(1) = <<1,0>, 1> = 4, X(2) = <<0,1>, 0> = 3
    assert name.read_text().splitlines()[:3] == ["0", "4", "3"]


def test_short_prefix_times_out(tmp_path):
    # query sentences have large codes, so a short prefix never reaches them
    name, sig = tmp_path / "x.name", tmp_path / "two.sig"
    run("make-name", "--model", "twopoint", "--length", "1000", "--out", str(name))
    sig.write_text("pred Q 1 id\nfun f 1 id\nconst c_a\nconst c_b\n")
    assert run("complete", "--name", str(name), "--sig", str(sig), "--stages", "1")[0] == TIMEOUT


def test_name_log_replays_without_the_structure(tmp_path):
    log, sig = tmp_path / "log.name", tmp_path / "two.sig"
    sig.write_text("pred Q 1 id\nfun f 1 id\nconst c_a\nconst c_b\n")
    q = ["query", "--pred", "Q", "--terms", "c_b", "--prec", "1"]
    code, direct = run(*q, "--model", "twopoint", "--name-log", str(log))
    assert code == OK
    assert run(*q, "--name", str(log), "--sig", str(sig)) == (OK, direct)
    t1, t2 = tmp_path / "t1", tmp_path / "t2"
    c = ["complete", "--stages", "6"]
    assert run(*c, "--model", "twopoint", "--trace", str(t1), "--name-log", str(log))[0] == OK
    assert run(*c, "--name", str(log), "--sig", str(sig), "--trace", str(t2))[0] == OK
    assert t1.read_bytes() == t2.read_bytes()


def test_complete_trace_replay_and_resume(tmp_path):
    t1, t2, s1, s2 = (tmp_path / n for n in ("t1", "t2", "s1", "s2"))
    base = ["complete", "--model", "twopoint", "--stages", "8"]
    assert run(*base, "--trace", str(t1), "--stats", str(s1))[0] == OK
    assert run(*base, "--trace", str(t2), "--stats", str(s2))[0] == OK
    assert t1.read_bytes() == t2.read_bytes() and s1.read_bytes() == s2.read_bytes()
    half = tmp_path / "half"
    assert run("complete", "--model", "twopoint", "--stages", "4", "--trace", str(half))[0] == OK
    t3 = tmp_path / "t3"
    assert run(*base, "--resume", str(half), "--trace", str(t3))[0] == OK
    assert t3.read_bytes() == t1.read_bytes()


def test_complete_pair_budget_timeout():
    assert run("complete", "--model", "twopoint", "--stages", "2", "--pair-budget", "1")[0] == TIMEOUT


def test_complete_canonical_enumeration():
    code, out = run("complete", "--model", "twopoint", "--stages", "2", "--enumeration", "canonical")
    assert code == OK and out.startswith("stage 2")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "cfol", "eval", "(num 3 2)"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "3/4\n"
