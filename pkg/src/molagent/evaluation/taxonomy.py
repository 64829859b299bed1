"""Error taxonomy: annotation records and class/subtype distributions.

Three classes cover where a failure originated: the reasoning ability, the
grounding ability (tool selection and input formatting), or the tools
themselves.  Each class owns a fixed set of subtypes; mismatched pairs are
rejected at construction.  Annotations live in append-only JSONL sidecars
next to the traces they describe.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

REASONING = "reasoning"
GROUNDING = "grounding"
TOOL = "tool"
CLASSES = (REASONING, GROUNDING, TOOL)

SUBTYPE_CLASS: dict[str, str] = {
    "wrong knowledge/reasoning": REASONING,
    "wrong final answer": REASONING,
    "information oversight": REASONING,
    "algebra error": REASONING,
    "incomplete reasoning": REASONING,
    "wrong input format": GROUNDING,
    "wrong tool output": TOOL,
    "inconsistent tool outputs": TOOL,
}

SUBTYPES = tuple(SUBTYPE_CLASS)


@dataclass(frozen=True)
class ErrorAnnotation:
    trace_id: str
    error_class: str
    subtype: str
    step_index: int | None = None
    note: str = ""
    annotator: str = ""

    def __post_init__(self):
        if self.error_class not in CLASSES:
            raise ValueError(f"class must be one of {CLASSES}, got {self.error_class!r}")
        if self.subtype not in SUBTYPE_CLASS:
            raise ValueError(f"unknown subtype {self.subtype!r}")
        if SUBTYPE_CLASS[self.subtype] != self.error_class:
            raise ValueError(
                f"subtype {self.subtype!r} belongs to class "
                f"{SUBTYPE_CLASS[self.subtype]!r}, not {self.error_class!r}")
        if self.step_index is not None and self.step_index < 1:
            raise ValueError("step_index is 1-based")

    def to_dict(self) -> dict:
        return {
            "trace_id": self.trace_id,
            "class": self.error_class,
            "subtype": self.subtype,
            "step_index": self.step_index,
            "note": self.note,
            "annotator": self.annotator,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ErrorAnnotation":
        return cls(
            trace_id=data["trace_id"],
            error_class=data["class"],
            subtype=data["subtype"],
            step_index=data.get("step_index"),
            note=data.get("note", ""),
            annotator=data.get("annotator", ""),
        )


@dataclass(frozen=True)
class ErrorDistribution:
    total: int
    by_class: dict[str, tuple[int, float]]
    by_subtype: dict[str, tuple[int, float]]


def aggregate_errors(annotations: list[ErrorAnnotation]) -> ErrorDistribution:
    """Counts and ratios at both levels; ratios sum to 1 within each level."""
    total = len(annotations)
    class_counts: dict[str, int] = {}
    subtype_counts: dict[str, int] = {}
    for a in annotations:
        class_counts[a.error_class] = class_counts.get(a.error_class, 0) + 1
        subtype_counts[a.subtype] = subtype_counts.get(a.subtype, 0) + 1
    if total == 0:
        return ErrorDistribution(0, {}, {})
    return ErrorDistribution(
        total=total,
        by_class={c: (n, n / total) for c, n in sorted(class_counts.items())},
        by_subtype={s: (n, n / total) for s, n in sorted(subtype_counts.items())},
    )


def render_distribution(dist: ErrorDistribution) -> str:
    if dist.total == 0:
        return "no annotations"
    lines = [f"total errors: {dist.total}", "", "by class:"]
    for name, (count, ratio) in sorted(
        dist.by_class.items(), key=lambda kv: -kv[1][0]
    ):
        lines.append(f"  {name:<12} {count:>5}  {100 * ratio:6.2f}%")
    lines.append("")
    lines.append("by subtype:")
    for name, (count, ratio) in sorted(
        dist.by_subtype.items(), key=lambda kv: -kv[1][0]
    ):
        lines.append(f"  {name:<28} {count:>5}  {100 * ratio:6.2f}%")
    return "\n".join(lines)


def save_annotations(path: str | Path, annotations: list[ErrorAnnotation]) -> None:
    """Append records to a JSONL sidecar (append-only by design)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as fh:
        for a in annotations:
            fh.write(json.dumps(a.to_dict(), sort_keys=True, ensure_ascii=False) + "\n")


def load_annotations(path: str | Path) -> list[ErrorAnnotation]:
    path = Path(path)
    if not path.exists():
        return []
    out = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.strip():
            out.append(ErrorAnnotation.from_dict(json.loads(line)))
    return out
