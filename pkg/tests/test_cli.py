import json
from pathlib import Path

import pytest

from cli import EXIT_INCONCLUSIVE, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, main

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def isolated_env(tmp_path, monkeypatch):
    monkeypatch.setenv("HF_CACHE_PATH", str(tmp_path / "cache.db"))
    for name in ("HF_CATALOG", "HF_NODE_BUDGET", "HF_COSET_BUDGET", "HF_WORKERS", "HF_OUTPUT_FORMAT"):
        monkeypatch.delenv(name, raising=False)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.startswith("{") else out)


def test_measure(capsys):
    code, report = run(capsys, "measure", "(0;2,3,7)")
    assert code == EXIT_OK
    assert report["kind"] == "measure"
    assert report["result"]["measure"] == "1/42"


def test_measures_note_second_value(capsys):
    code, report = run(capsys, "measures", "2")
    assert code == EXIT_OK
    assert [m["measure"] for m in report["result"]["measures"]] == ["1/42", "1/24"]
    assert "(0;2,3,8)" in report["result"]["notes"][0]


def test_signatures(capsys):
    code, report = run(capsys, "signatures", "2", "24")
    assert code == EXIT_OK
    assert report["result"]["signatures"] == ["(0;2,3,12)", "(0;2,4,6)", "(0;3,3,4)"]
    code, _ = run(capsys, "signatures", "4", "240")
    assert code == EXIT_NEGATIVE


def test_find_action(capsys):
    code, report = run(capsys, "find-action", "C5", "2", "--no-cache")
    assert code == EXIT_OK
    assert report["summary"] == "C5 acts on genus 2 with signature (0;5,5,5)"
    code, report = run(capsys, "find-action", "S4", "2", "--no-cache")
    assert code == EXIT_NEGATIVE
    assert report["result"]["status"] == "absent"


def test_find_action_is_cached(capsys, tmp_path):
    cache = str(tmp_path / "actions.db")
    first = run(capsys, "find-action", "A5", "4", "--cache", cache, "--workers", "1")
    second = run(capsys, "find-action", "A5", "4", "--cache", cache, "--workers", "1")
    assert first == second
    assert first[0] == EXIT_OK


def test_find_action_budget_exhausted(capsys):
    code, report = run(capsys, "find-action", "S5", "4", "--no-cache", "--node-budget", "1", "--workers", "1")
    assert code == EXIT_INCONCLUSIVE
    assert report["summary"].startswith("inconclusive")


def test_verify_vector(capsys, tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"group": "S5", "signature": "(0;5,2,4)", "elliptic": ["(1,2,3,4,5)", "(1,2)", "(5,4,3,1)"]}))
    code, report = run(capsys, "verify-vector", str(good))
    assert code == EXIT_OK
    assert report["result"]["verdict"] == "VALID"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"group": "S5", "signature": "(0;5,2,4)", "elliptic": ["(1,2,3,4,5)", "(1,2)", "(1,2,3,4)"]}))
    code, report = run(capsys, "verify-vector", str(bad))
    assert code == EXIT_NEGATIVE
    assert report["result"]["verdict"] == "INVALID"


def test_todd_coxeter(capsys):
    code, report = run(capsys, "todd-coxeter", "<x,y | x^4, y^6, (x*y)^2, (x^-1*y)^2>")
    assert code == EXIT_OK
    assert report["result"]["order"] == 24
    code, report = run(capsys, "todd-coxeter", "<a,b | a^2, b^3, (a*b)^7>", "--max-cosets", "50")
    assert code == EXIT_INCONCLUSIVE
    assert report["result"]["status"] == "overflow"


def test_embed(capsys):
    code, report = run(capsys, "embed", "H4", "S5")
    assert code == EXIT_NEGATIVE
    assert report["summary"] == "no monomorphism (definitive: brute force)"
    code, report = run(capsys, "embed", "C4", "S4")
    assert code == EXIT_OK
    assert report["result"]["definitive"] is True


def test_genus_report(capsys):
    code, report = run(capsys, "genus-report", "8", "--no-cache")
    assert code == EXIT_OK
    assert report["result"]["result"] == "impossible"
    code, report = run(capsys, "genus-report", "3", "--no-cache")
    assert code == EXIT_INCONCLUSIVE
    assert report["result"]["missing_inputs"] == ["catalog with coverage=all-of-order:96"]


def test_genus_report_cached(capsys, tmp_path):
    cache = str(tmp_path / "verdicts.db")
    first = run(capsys, "genus-report", "9", "--cache", cache)
    second = run(capsys, "genus-report", "9", "--cache", cache)
    assert first == second


def test_trichotomy(capsys):
    code, report = run(capsys, "trichotomy", "--dim", "6", "--singular", "0", "--involution-fixes")
    assert code == EXIT_OK
    assert report["summary"] == "countably_many; locally_rigid=true"
    code, _ = run(capsys, "trichotomy", "--dim", "3", "--singular", "0")
    assert code == EXIT_USAGE


def test_trichotomy_markdown(capsys):
    code, text = run(capsys, "trichotomy", "--dim", "7", "--singular", "empty", "--format", "markdown")
    assert code == EXIT_OK
    assert text.startswith("# trichotomy")


def test_format_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("HF_OUTPUT_FORMAT", "markdown")
    code, text = run(capsys, "measure", "(0;2,4,5)")
    assert code == EXIT_OK
    assert text.startswith("# measure")


def test_two_generated(capsys):
    code, report = run(capsys, "two-generated", "8", "--catalog", str(FIXTURES / "order8.catalog"))
    assert code == EXIT_OK
    assert sorted(report["result"]["groups"]) == ["C4xC2", "C8", "D4", "Q8"]
    assert report["result"]["coverage"] == ["all-of-order:8"]
    code, _ = run(capsys, "two-generated", "8")
    assert code == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["no-such-command"],
        ["measure", "0;2,3,7"],
        ["measures", "zero"],
        ["signatures", "1", "4"],
        ["find-action", "Z9", "2", "--no-cache"],
        ["embed", "S4", "S5", "--catalog", str(FIXTURES / "bad_order.catalog")],
        ["todd-coxeter", "<x | y^2>"],
    ],
)
def test_usage_errors(capsys, argv):
    assert main(argv) == EXIT_USAGE


def test_genus_report_independent_of_workers(capsys):
    main(["genus-report", "8", "--no-cache", "--workers", "1"])
    one = capsys.readouterr().out
    main(["genus-report", "8", "--no-cache", "--workers", "4"])
    assert capsys.readouterr().out == one
