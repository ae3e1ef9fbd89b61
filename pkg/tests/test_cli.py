import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistor_lab import cli
from twistor_lab.frame_geometry import DATA_DIR
from twistor_lab.reports import Report


def run(capsysbinary, *argv):
    code = cli.main(list(argv))
    out, err = capsysbinary.readouterr()
    return code, out.decode("utf-8"), err.decode("utf-8")


def _failing_suite(seed, samples):
    r = Report("forced")
    r.add("ok", True, "1", "1")
    r.add("wrong", False, "2", "3")
    return [(r, "forced failure")]


def _raising_suite(seed, samples):
    raise ZeroDivisionError("boom")


@pytest.mark.parametrize("suite", ["heisenberg", "real-slice", "itoh", "appendix-b", "product"])
def test_quick_suites_pass(capsysbinary, suite):
    code, out, _ = run(capsysbinary, "verify", suite)
    assert code == cli.EXIT_OK
    assert "✗" not in out and "✓" in out


def test_real_slice_reports_curvature_entry(capsysbinary):
    report = cli.run_suite("real-slice")
    names = {c.name: c for c in report.checks}
    hit = [c for n, c in names.items() if n.endswith(": R_1212")]
    assert hit and hit[0].status == "pass" and hit[0].expected == "-3"


def test_incidence_suite_full_agreement():
    report = cli.run_suite("incidence", seed=42, samples=1000)
    assert report.passed
    agree = [c for c in report.checks if "agree" in c.name]
    assert any(c.actual == "1000/1000" for c in agree)


def test_failing_suite_exit_code_and_rendering(capsysbinary, monkeypatch):
    monkeypatch.setitem(cli.SUITES, "product", _failing_suite)
    code, out, _ = run(capsysbinary, "verify", "product")
    assert code == cli.EXIT_FAIL
    assert "✗ forced: wrong" in out
    assert "expected: 2" in out and "actual:   3" in out
    assert "1/2 checks passed" in out


def test_internal_error_exit_code(capsysbinary, monkeypatch):
    monkeypatch.setitem(cli.SUITES, "product", _raising_suite)
    code, out, err = run(capsysbinary, "verify", "product")
    assert code == cli.EXIT_ERROR
    assert "ZeroDivisionError" in err and out == ""


@pytest.mark.parametrize("argv", [
    ["verify", "nonsense"],
    ["verify", "product", "--samples", "0"],
    ["verify", "product", "--geometry", "x.json"],
    ["verify", "itoh", "--geometry", "/does/not/exist.json"],
    ["verify", "product", "--format", "xml"],
    ["frobnicate"],
    [],
])
def test_usage_errors(capsysbinary, argv):
    code, _, err = run(capsysbinary, *argv)
    assert code == cli.EXIT_USAGE
    assert "usage error" in err


def test_bad_seed_env(capsysbinary, monkeypatch):
    monkeypatch.setenv(cli.SEED_ENV, "abc")
    assert run(capsysbinary, "verify", "product")[0] == cli.EXIT_USAGE


def test_seed_from_environment(capsysbinary, monkeypatch):
    monkeypatch.setenv(cli.SEED_ENV, "7")
    code, out, _ = run(capsysbinary, "verify", "product", "--format", "json")
    assert code == 0 and json.loads(out)["seed"] == 7
    code, out, _ = run(capsysbinary, "verify", "product", "--format", "json", "--seed", "9")
    assert json.loads(out)["seed"] == 9


def test_default_seed(capsysbinary, monkeypatch):
    monkeypatch.delenv(cli.SEED_ENV, raising=False)
    _, out, _ = run(capsysbinary, "verify", "product", "--format", "json")
    assert json.loads(out)["seed"] == cli.DEFAULT_SEED


def test_json_schema_and_determinism(capsysbinary):
    first = run(capsysbinary, "verify", "lemma-2-3", "--samples", "10", "--format", "json")
    second = run(capsysbinary, "verify", "lemma-2-3", "--samples", "10", "--format", "json")
    assert first == second
    doc = json.loads(first[1])
    assert set(doc) == {"suite", "seed", "checks", "elapsed_ms"}
    assert doc["elapsed_ms"] == 0
    for c in doc["checks"]:
        assert set(c) == {"name", "status", "expected", "actual", "paper_ref"}
        assert c["status"] in cli.STATUSES and c["paper_ref"]
    names = [c["name"] for c in doc["checks"]]
    assert names == sorted(names)


def test_timing_records_elapsed():
    assert cli.run_suite("product", timing=True).elapsed_ms >= 0
    assert cli.run_suite("product").elapsed_ms == 0


@pytest.mark.parametrize("suite,path", [("heisenberg", "heisenberg.json"), ("real-slice", "real_slice.json"),
                                        ("itoh", "real_slice.json")])
def test_geometry_option(capsysbinary, suite, path):
    code, out, _ = run(capsysbinary, "verify", suite, "--geometry", str(DATA_DIR / path), "--format", "json")
    assert code == 0
    # the sign-convention comparison only applies to the built-in structure
    builtin = [c for c in cli.run_suite(suite).to_dict()["checks"] if not c["name"].startswith("displayed phi")]
    assert json.loads(out)["checks"] == builtin


def test_empty_report_renders():
    r = cli.SuiteReport("empty", 1, ())
    assert cli.SuiteReport.from_json(cli.render_report(r, "json").decode()) == r
    assert cli.render_report(r).decode().endswith("0/0 checks passed\n")
    assert r.passed


def test_check_status_validated():
    with pytest.raises(ValueError):
        cli.CheckResult("x", "maybe", "", "", "")


text = st.text(st.characters(blacklist_categories=("Cs",)), max_size=12)
checks = st.builds(cli.CheckResult, text, st.sampled_from(cli.STATUSES), text, text, text)


@given(st.builds(cli.SuiteReport, text, st.integers(-10**6, 10**6), st.lists(checks, max_size=5).map(tuple),
                 st.integers(0, 10**6)))
def test_json_round_trip(report):
    assert cli.SuiteReport.from_json(cli.render_report(report, "json").decode("utf-8")) == report
    assert cli.render_report(report, "json") == cli.render_report(report, "json")


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "twistor_lab.cli", "verify", "appendix-b"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip().endswith("checks passed")


def test_all_suites_pass(capsysbinary):
    code, out, _ = run(capsysbinary, "verify", "all", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    suites = {c["name"].split("/")[0] for c in doc["checks"]}
    assert suites == set(cli.SUITES)
