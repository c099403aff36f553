"""Report envelope shared by every command.

JSON output is ``{"kind": ..., "summary": ..., "result": {...}}`` with sorted
keys and two-space indentation, so identical inputs give identical bytes.
Field names are frozen; ``report_schema.json`` lists them per kind. Markdown
renders the same envelope as tables.
"""
import json
from typing import Any, Dict, List, Literal, Optional, Type

from pydantic import BaseModel, Field

from audit import AuditReport
from exclusivity import ExclusivityVerdict
from riemann_hurwitz import ActionRecord, VerificationReport
from trichotomy import GeometryProfile, TrichotomyOutcome


class ReportError(ValueError):
    pass


class MeasureReport(BaseModel):
    signature: str
    measure: str

    @property
    def summary(self) -> str:
        return self.measure


class MinimalMeasuresReport(BaseModel):
    measures: List[Dict[str, str]]
    notes: List[str] = Field(default_factory=list)

    @property
    def summary(self) -> str:
        return ", ".join(f"{m['measure']} {m['signature']}" for m in self.measures)


class SignatureListReport(BaseModel):
    genus: int
    order: int
    signatures: List[str]

    @property
    def summary(self) -> str:
        return f"{len(self.signatures)} signature(s) for order {self.order} on genus {self.genus}"


class ActionSearchReport(BaseModel):
    group: str
    group_order: int
    genus: int
    status: Literal["found", "absent", "inconclusive"]
    record: Optional[ActionRecord] = None
    searched: List[List[str]] = Field(default_factory=list)

    @property
    def summary(self) -> str:
        if self.record is not None:
            return f"{self.group} acts on genus {self.genus} with signature {self.record.signature}"
        if self.status == "absent":
            return f"{self.group} does not act on genus {self.genus} (definitive)"
        return f"inconclusive: search budget exhausted for {self.group} on genus {self.genus}"


class CosetReport(BaseModel):
    presentation: str
    status: Literal["complete", "overflow"]
    max_cosets: int
    order: Optional[int] = None
    generators: Dict[str, str] = Field(default_factory=dict)

    @property
    def summary(self) -> str:
        if self.status == "complete":
            return f"order {self.order}"
        return f"overflow: more than {self.max_cosets} cosets"


class EmbeddingReport(BaseModel):
    source: str
    target: str
    source_order: int
    target_order: int
    status: Literal["found", "absent", "inconclusive"]
    method: str
    definitive: bool
    images: List[str] = Field(default_factory=list)

    @property
    def summary(self) -> str:
        if self.status == "found":
            return f"monomorphism {self.source} -> {self.target} found"
        if self.status == "absent":
            return f"no monomorphism (definitive: {self.method})"
        return "inconclusive: node budget exhausted"


class TrichotomyReport(BaseModel):
    profile: GeometryProfile
    outcome: TrichotomyOutcome

    @property
    def summary(self) -> str:
        return self.outcome.summary


class TwoGeneratedReport(BaseModel):
    order: int
    groups: List[str]
    coverage: List[str] = Field(default_factory=list)
    unresolved: List[List[str]] = Field(default_factory=list)

    @property
    def summary(self) -> str:
        count = f"{len(self.groups)} non-isomorphic 2-generated group(s) of order {self.order} in the catalog"
        if self.unresolved:
            return f"at most {count}; {len(self.unresolved)} pair(s) undecided"
        return count


REPORT_KINDS: Dict[str, Type[BaseModel]] = {
    "measure": MeasureReport,
    "minimal_measures": MinimalMeasuresReport,
    "signatures": SignatureListReport,
    "action_record": ActionRecord,
    "action_search": ActionSearchReport,
    "verification": VerificationReport,
    "coset_table": CosetReport,
    "embedding": EmbeddingReport,
    "exclusivity_verdict": ExclusivityVerdict,
    "trichotomy": TrichotomyReport,
    "two_generated": TwoGeneratedReport,
    "audit": AuditReport,
}
_KIND_OF = {model: kind for kind, model in REPORT_KINDS.items()}


def kind_of(result: BaseModel) -> str:
    try:
        return _KIND_OF[type(result)]
    except KeyError:
        raise ReportError(f"no report kind for {type(result).__name__}") from None


def summary_of(result: BaseModel) -> str:
    summary = getattr(result, "summary", None)
    if isinstance(summary, str):
        return summary
    if isinstance(result, ActionRecord):
        return f"{result.group} on genus {result.genus} with signature {result.signature}"
    return kind_of(result)


def envelope(result: BaseModel) -> Dict[str, Any]:
    return {"kind": kind_of(result), "summary": summary_of(result), "result": result.model_dump(mode="json")}


def emit_report(result: BaseModel, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(envelope(result), indent=2, sort_keys=True) + "\n"
    if fmt == "markdown":
        return render_markdown(envelope(result))
    raise ReportError(f"unknown output format {fmt!r}")


def parse_report(text: str) -> BaseModel:
    """Inverse of ``emit_report`` for JSON output."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ReportError(f"report is not JSON: {exc}") from exc
    try:
        model = REPORT_KINDS[data["kind"]]
    except (KeyError, TypeError):
        raise ReportError("report envelope has no known 'kind'") from None
    return model.model_validate(data["result"])


# Markdown ----------------------------------------------------------------------


def _cell(value: Any) -> str:
    if isinstance(value, (dict, list)):
        text = json.dumps(value, sort_keys=True, separators=(",", ":"))
    elif value is None:
        text = "-"
    elif isinstance(value, bool):
        text = "true" if value else "false"
    else:
        text = str(value)
    return text.replace("|", "\\|")


def _table(data: Dict[str, Any]) -> List[str]:
    lines = ["| field | value |", "|---|---|"]
    for key in sorted(data):
        value = data[key]
        if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            continue
        lines.append(f"| {key} | {_cell(value)} |")
    return lines


def render_markdown(env: Dict[str, Any]) -> str:
    result = env["result"]
    lines = [f"# {env['kind']}", "", f"**{env['summary']}**", ""]
    lines += _table(result)
    for key in sorted(result):
        value = result[key]
        if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            for i, item in enumerate(value, start=1):
                title = item.get("kind") or item.get("name") or item.get("group") or str(i)
                lines += ["", f"## {key} {i}: {title}", ""]
                lines += _table(item)
    return "\n".join(lines) + "\n"
