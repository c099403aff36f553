import json

import pytest
from pydantic import BaseModel

from exclusivity import weakly_exclusive_verdict
from report import (
    EmbeddingReport,
    MeasureReport,
    ReportError,
    TrichotomyReport,
    emit_report,
    envelope,
    kind_of,
    parse_report,
)
from riemann_hurwitz import canonical_actions
from trichotomy import GeometryProfile, trichotomy_classify


def test_json_envelope_is_sorted_and_stable():
    report = MeasureReport(signature="(0;2,3,7)", measure="1/42")
    text = emit_report(report)
    assert text == emit_report(report)
    data = json.loads(text)
    assert list(data) == ["kind", "result", "summary"]
    assert data["kind"] == "measure"
    assert data["summary"] == "1/42"
    assert data["result"] == {"measure": "1/42", "signature": "(0;2,3,7)"}


def test_parse_report_inverts_emit():
    verdict = weakly_exclusive_verdict(8)
    again = parse_report(emit_report(verdict))
    assert again == verdict


def test_action_record_envelope():
    record = canonical_actions(5)[1]
    env = envelope(record)
    assert env["kind"] == "action_record"
    assert env["summary"] == "C5 on genus 5 with signature (1;5,5)"
    assert env["result"]["vector"]["elliptic"] == ["(1,2,3,4,5)", "(1,5,4,3,2)"]


def test_embedding_summary():
    report = EmbeddingReport(
        source="H4",
        target="S5",
        source_order=40,
        target_order=120,
        status="absent",
        method="brute force",
        definitive=True,
    )
    assert envelope(report)["summary"] == "no monomorphism (definitive: brute force)"


def test_markdown_renders_tables():
    profile = GeometryProfile(ambient_dim=6, singular="zero_dim", singular_dim=0, has_order_two_with_fixed_points=True)
    report = TrichotomyReport(profile=profile, outcome=trichotomy_classify(profile))
    text = emit_report(report, "markdown")
    assert text.startswith("# trichotomy\n")
    assert "**countably_many; locally_rigid=true**" in text
    assert "| field | value |" in text


def test_markdown_lists_certificates():
    text = emit_report(weakly_exclusive_verdict(8), "markdown")
    assert "## certificates 1: lcm" in text
    assert "## certificates 2: sylow" in text


def test_report_errors():
    with pytest.raises(ReportError):
        parse_report("not json")
    with pytest.raises(ReportError):
        parse_report('{"kind": "horoscope", "summary": "", "result": {}}')
    with pytest.raises(ReportError):
        emit_report(MeasureReport(signature="(2;-)", measure="2"), "yaml")

    class Stray(BaseModel):
        x: int = 0

    with pytest.raises(ReportError):
        kind_of(Stray())
