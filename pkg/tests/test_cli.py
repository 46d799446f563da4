import json
from fractions import Fraction
import subprocess
import sys

import pytest

from banalg.acceptance import strip_timing
from banalg.cli import default_order, parse_ring, run
from banalg.errors import ParseError


def call(*argv):
    code, lines = run(list(argv), capture=True)
    return code, [json.loads(s) for s in lines]


def report(objs):
    assert objs[-1]["kind"] == "report"
    return objs[-1]


def test_certify_poly_example():
    code, objs = call("certify", "--flavor", "poly", "--degree", "6", "--trials", "1000", "--seed", "42")
    assert code == 0
    rep = report(objs)
    assert len(rep["results"]) == 1000
    assert all(r["pass"] for r in rep["results"])
    assert rep["seed"] == 42 and rep["schema"] == 1


def test_verify_hepi_example():
    code, objs = call("verify-hepi", "--source", "poly", "--target", "tate:1", "--ring", "padic:2", "--order", "8")
    assert code == 0
    assert report(objs)["results"][0]["verdict"] is True
    assert report(objs)["truncation_order"] == 8


def test_disc_counterexample_example():
    code, objs = call("certify", "--flavor", "disc", "--counterexample", "8")
    assert code == 0
    last = report(objs)["results"][-1]
    assert last["pass"] is False and last["expected_failure"] and last["reproduced"]
    assert Fraction(last["ratio"]) == 4


@pytest.mark.parametrize("argv", [
    ("certify", "--flavor", "tate:1", "--ring", "padic:2", "--trials", "20"),
    ("certify", "--flavor", "formal", "--trials", "20"),
    ("certify", "--flavor", "stein(1;1/2<3/4)", "--ring", "rat", "--trials", "10", "--degree", "5"),
    ("check-strictness", "--flavor", "tate:1"),
    ("localize", "--kind", "weierstrass"),
    ("localize", "--kind", "laurent"),
    ("localize", "--kind", "rational"),
    ("hh", "--algebra", "poly:2", "--order", "4"),
    ("hh", "--algebra", "ci:1:x^2", "--cutoff", "3"),
    ("hh", "--algebra", "ci:1:x^2", "--cutoff", "2", "--ring", "padic:2", "--flavor", "tate:1"),
    ("hh", "--algebra", "jet:1:1", "--model", "bar", "--cutoff", "2"),
])
def test_passing_commands_exit_zero(argv):
    code, objs = call(*argv)
    assert code == 0
    assert report(objs)["pass"] is True


@pytest.mark.parametrize("argv", [
    ("check-strictness", "--flavor", "disc:1", "--ring", "int"),
    ("verify-hepi", "--target", "disc:1", "--ring", "int"),
    ("localize", "--kind", "quotient"),
])
def test_failed_checks_exit_one(argv):
    code, objs = call(*argv)
    assert code == 1
    assert report(objs)["pass"] is False


def test_unsupported_input_exits_one():
    code, objs = call("hh", "--algebra", "poly:1", "--ring", "int")
    assert code == 1
    assert objs[-1]["kind"] == "error"


@pytest.mark.parametrize("argv, token, position", [
    (("certify", "--ring", "padic:x"), "x", 6),
    (("certify", "--flavor", "cube(1)"), None, None),
    (("certify", "--trials", "many"), "many", 2),
    (("bogus",), "bogus", 0),
    (("hh", "--algebra", "ci:1:x^^2"), None, None),
])
def test_parse_errors_exit_two(argv, token, position):
    code, objs = call(*argv)
    assert code == 2
    err = objs[-1]
    assert err["kind"] == "error" and err["error"] == "ParseError"
    assert "token" in err and "position" in err
    if token is not None:
        assert err["token"] == token
        assert err["position"] == position


@pytest.mark.parametrize("argv", [
    ("certify", "--trials", "30", "--seed", "5"),
    ("certify", "--flavor", "formal", "--trials", "30", "--seed", "5"),
    ("hh", "--algebra", "poly:1", "--order", "5"),
])
def test_reports_repeat_modulo_timing(argv):
    a, b = run(list(argv), capture=True)[1], run(list(argv), capture=True)[1]
    strip = lambda lines: [json.dumps(strip_timing(json.loads(s)), sort_keys=True) for s in lines]  # noqa: E731
    assert strip(a) == strip(b)
    assert a[:-1] == b[:-1]  # record lines carry no timing at all


def test_seed_changes_records():
    a = call("certify", "--trials", "5", "--seed", "1")[1]
    b = call("certify", "--trials", "5", "--seed", "2")[1]
    assert a[:-1] != b[:-1]


def test_order_environment(monkeypatch):
    monkeypatch.setenv("BANALG_ORDER", "5")
    assert default_order() == 5
    assert report(call("hh", "--algebra", "poly:1")[1])["truncation_order"] == 5
    monkeypatch.setenv("BANALG_ORDER", "five")
    assert call("hh", "--algebra", "poly:1")[0] == 2
    monkeypatch.delenv("BANALG_ORDER")
    assert default_order() == 8


@pytest.mark.parametrize("text, label", [("int", "Z"), ("rat", "Q"), ("padic", "Q_2"), ("padic:3", "Q_3")])
def test_parse_ring(text, label):
    assert parse_ring(text).label.startswith(label)


def test_parse_ring_unknown():
    with pytest.raises(ParseError) as e:
        parse_ring("reals")
    assert e.value.token == "reals"


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "banalg.cli", "hh", "--algebra", "field", "--model", "bar", "--cutoff", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    lines = proc.stdout.strip().splitlines()
    assert all(json.loads(s)["schema"] == 1 for s in lines)
    assert "ranks" in proc.stderr
