import io
import os
import subprocess
import sys

import pytest

from conftest import FIXTURES, T_SYSTEM, U_SYSTEM

from cyclam.cli import run


def cli(*argv):
    buf = io.StringIO()
    status = run(list(argv), stdout=buf)
    return status, buf.getvalue().splitlines()


@pytest.fixture
def files(tmp_path):
    t = tmp_path / "T.sys"
    t.write_text(T_SYSTEM)
    u = tmp_path / "U.sys"
    u.write_text(U_SYSTEM)
    return str(t), str(u), tmp_path


def test_analyze_t(files):
    t, _, _ = files
    status, lines = cli("analyze", t)
    assert status == 0
    assert lines[:2] == ["regular: yes (9 states reg+)", "strongly_regular: yes"]
    assert "max_chain: 1" in lines


def test_analyze_u(files):
    _, u, _ = files
    status, lines = cli("analyze", u)
    assert status == 0
    assert "regular: yes (6 states reg)" in lines
    assert "strongly_regular: no" in lines
    assert any(line.startswith("witness: ") for line in lines)


def test_analyze_unknown_on_small_budget(files):
    _, u, _ = files
    status, lines = cli("analyze", u, "--max-states", "2")
    assert status == 2
    assert "strongly_regular: unknown" in lines


def test_parse(files):
    status, lines = cli("parse", "mu f. \\x. f x")
    assert status == 0
    assert lines == ["kind: lambda-mu", "term: mu f. \\x. f x", "size: 5", "guarded: yes"]
    t, _, _ = files
    status, lines = cli("parse", t)
    assert status == 0 and lines[0] == "kind: system"


def test_parse_errors_exit_3():
    status, lines = cli("parse", "\\x.y")
    assert status == 3 and lines == ["error: open term: y"]
    status, lines = cli("parse", "\\x. (x")
    assert status == 3 and lines[0].startswith("error: syntax error at 1:")


def test_unguarded_input_exits_3():
    status, lines = cli("unfold", "mu x. x")
    assert status == 3 and lines == ["error: unguarded mu"]


def test_unfold(files):
    t, _, _ = files
    status, lines = cli("unfold", t, "--depth", "5")
    assert status == 0 and lines[-1] == "tree: \\x. \\y. (\\x1. _) y x"
    status, lines = cli("unfold", "mu f. \\x. f x", "--depth", "3")
    assert lines[-1] == "tree: \\x. (\\x1. _) x"


def test_subterms_and_dot(files):
    t, _, tmp = files
    dot = tmp / "t.dot"
    status, lines = cli("subterms", t, "--strategy", "reg+", "--dot", str(dot))
    assert status == 0
    assert "states: 9" in lines
    text = dot.read_text()
    assert text.startswith("digraph reductions {")
    assert text.count("->") == 9
    for label in ("@0", "@1", "λ", "S"):
        assert f'[label="{label}"]' in text
    assert '"(x) \\\\y. T() y x"' in text


def test_subterms_infinite_dot_marks_the_loop(files):
    _, u, tmp = files
    dot = tmp / "u.dot"
    status, lines = cli("subterms", u, "--strategy", "reg+", "--dot", str(dot))
    assert status == 1 and "verdict: infinite" in lines
    assert 'label="pump", style=dashed' in dot.read_text()
    status, lines = cli("subterms", u, "--strategy", "reg", "--dot", str(dot))
    assert status == 0 and 'label="del"' in dot.read_text()


def test_no_pump_exhausts(files):
    _, u, _ = files
    status, lines = cli("subterms", u, "--no-pump", "--max-states", "50")
    assert status == 2 and "verdict: budget-exhausted" in lines


def test_budget_from_environment(files, monkeypatch):
    _, u, _ = files
    monkeypatch.setenv("CYCLAM_BUDGET", "5")
    status, lines = cli("subterms", u, "--no-pump")
    assert status == 2 and "states: 5" in lines


def test_chains(files):
    t, u, _ = files
    status, lines = cli("chains", t, "--max-depth", "6")
    assert status == 0
    assert "binds: ε -> 00001" in lines and "max_chain: 1" in lines
    assert "infinite_chain: no" in lines
    status, lines = cli("chains", u)
    assert status == 0 and "infinite_chain: yes" in lines
    assert any(line.startswith("witness_chain: ε 00001 00") for line in lines)


def test_derive_and_check(files):
    t, u, tmp = files
    out = tmp / "t.deriv"
    status, lines = cli("derive", t, "--system", "reg0+", "--out", str(out))
    assert status == 0 and "valid: yes" in lines and "nodes: 11" in lines
    status, lines = cli("check-derivation", str(out), "--system", "reg0+", "--root", "() T()")
    assert status == 0 and "valid: yes" in lines
    status, lines = cli("check-derivation", str(out), "--system", "reg0+", "--root", "\\x. x")
    assert status == 1 and "reason: root mismatch" in lines
    status, lines = cli("derive", u, "--system", "reg+")
    assert status == 1 and lines == ["error: not strongly regular"]


def test_check_shipped_fixture():
    path = os.path.join(FIXTURES, "t_regplus_right.deriv")
    status, lines = cli("check-derivation", path, "--system", "reg0+")
    assert status == 1
    assert lines[1:] == ["valid: no", "reason: prefix condition", "path: /0"]


def test_express_and_roundtrip(files):
    t, u, _ = files
    status, lines = cli("express", t)
    assert status == 0 and lines == ["strongly_regular: yes", "term: mu f1. \\x. \\y. f1 y x"]
    status, lines = cli("express", u)
    assert status == 1 and lines[0] == "strongly_regular: no" and lines[1].startswith("witness:")
    status, lines = cli("roundtrip", t, "--depth", "12")
    assert status == 0 and lines[-1] == "verified: yes (depth 12)"
    status, lines = cli("roundtrip", "\\x. mu f. \\y. f x", "--depth", "12")
    assert status == 0 and lines[-1] == "verified: yes (depth 12)"


def test_usage_errors_exit_3(files):
    t, _, _ = files
    assert cli()[0] == 3
    assert cli("frobnicate", t)[0] == 3
    status, lines = cli("subterms", t, "--strategy", "reg++")
    assert status == 3 and lines[0].startswith("error: usage:")
    assert cli("check-derivation", "/nonexistent/file", "--system", "reg")[0] == 3


def test_output_is_deterministic(files):
    _, u, _ = files
    assert cli("chains", u) == cli("chains", u)


def test_module_entry_point(files):
    t, _, _ = files
    proc = subprocess.run([sys.executable, "-m", "cyclam", "analyze", t],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "regular: yes (9 states reg+)"
