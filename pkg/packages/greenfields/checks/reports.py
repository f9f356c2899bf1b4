from typing import Literal

from pydantic import BaseModel, Field

from algebra.matrices import Matrix

CATALOG_CAVEAT = "catalog-bounded certificate"

Verdict = Literal["pass", "fail", "out-of-scope-limit"]


class Witness(BaseModel):
    """One exact piece of evidence; scalars are always strings."""

    kind: str
    label: str
    value: list | str | int


class CheckReport(BaseModel):
    check: str
    spec: str
    scope: list[str] = []
    verdict: Verdict
    witnesses: list[Witness] = []
    caveats: list[str] = Field(default_factory=lambda: [CATALOG_CAVEAT])

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def add(self, kind: str, label: str, value) -> "CheckReport":
        self.witnesses.append(Witness(kind=kind, label=label, value=value))
        return self

    def caveat(self, text: str) -> "CheckReport":
        if text not in self.caveats:
            self.caveats.append(text)
        return self

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def to_text(self) -> str:
        lines = [
            f"check:   {self.check}",
            f"spec:    {self.spec}",
            f"scope:   {', '.join(self.scope) or '-'}",
            f"verdict: {self.verdict.upper()}",
        ]
        for w in self.witnesses:
            lines.append(f"{w.kind} {w.label}:")
            lines.extend(f"  {row}" for row in _text_rows(w.value))
        lines.extend(f"note: {c}" for c in self.caveats)
        return "\n".join(lines)


def _text_rows(value) -> list[str]:
    if isinstance(value, list) and value and isinstance(value[0], list):
        width = max(len(str(x)) for row in value for x in row)
        return [" ".join(str(x).rjust(width) for x in row) for row in value]
    if isinstance(value, list):
        return ["[" + ", ".join(str(x) for x in value) + "]"]
    return [str(value)]


def matrix_witness(M: Matrix) -> list[list[str]]:
    return M.to_strings()


def vector_witness(vector, field) -> list[str]:
    return [field.format(c) for c in vector]


def render(report: CheckReport, output_format: str = "text") -> str:
    return report.to_json() if output_format == "json" else report.to_text()
