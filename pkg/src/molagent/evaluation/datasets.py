"""Benchmark sample model and JSONL dataset loading.

Two formats are supported:

* ``jsonl_specialized``: one object per line with ``id``, ``task`` (one of
  the 14 specialized task codes), ``question``, and ``gold``.
* ``jsonl_mcq``: one object per line with ``id``, ``question``, ``options``
  (letter -> text, 2 to 10 options), and ``gold`` (the correct letter).

Loading is schema-validated with line numbers in every error; an optional
seeded subsample keeps runs reproducible.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

SPECIALIZED_TASKS = (
    "NC-I2F", "NC-I2S", "NC-S2F", "NC-S2I",
    "PP-ESOL", "PP-Lipo", "PP-BBBP", "PP-Clintox", "PP-HIV", "PP-SIDER",
    "MC", "MG", "FS", "RS",
)
MCQ_TASK = "MCQ"
ALL_TASKS = SPECIALIZED_TASKS + (MCQ_TASK,)

OPTION_LETTERS = "ABCDEFGHIJ"

# Which metrics apply to each task.
TASK_METRICS: dict[str, tuple[str, ...]] = {
    "NC-I2F": ("EM",),
    "NC-I2S": ("EM", "Validity"),
    "NC-S2F": ("EM",),
    "NC-S2I": ("EM",),
    "PP-ESOL": ("RMSE",),
    "PP-Lipo": ("RMSE",),
    "PP-BBBP": ("Accuracy",),
    "PP-Clintox": ("Accuracy",),
    "PP-HIV": ("Accuracy",),
    "PP-SIDER": ("Accuracy",),
    "MC": ("caption_overlap",),
    "MG": ("EM", "FTS", "Validity"),
    "FS": ("EM", "FTS", "Validity"),
    "RS": ("EM", "FTS", "Validity"),
    MCQ_TASK: ("Accuracy",),
}

# Tasks whose predictions are molecules compared by canonical equality.
SMILES_OUTPUT_TASKS = ("NC-I2S", "MG", "FS", "RS")
NUMERIC_TASKS = ("PP-ESOL", "PP-Lipo")
BINARY_TASKS = ("PP-BBBP", "PP-Clintox", "PP-HIV", "PP-SIDER")


class SchemaError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DuplicateId(SchemaError):
    pass


@dataclass(frozen=True)
class EvalSample:
    id: str
    family: str  # 'specialized' | 'exam'
    task: str
    question: str
    gold: str
    options: dict[str, str] | None = None
    metric_keys: tuple[str, ...] = ()

    def __post_init__(self):
        if self.task not in ALL_TASKS:
            raise ValueError(f"unknown task code {self.task!r}")
        if self.task == MCQ_TASK:
            if not self.options:
                raise ValueError("MCQ samples need options")
            if self.gold not in self.options:
                raise ValueError("MCQ gold must be one of the option letters")
        if not self.metric_keys:
            object.__setattr__(self, "metric_keys", TASK_METRICS[self.task])

    def rendered_question(self) -> str:
        if not self.options:
            return self.question
        opts = "\n".join(f"({letter}) {text}" for letter, text in sorted(self.options.items()))
        return f"{self.question}\n{opts}"


def _parse_line(obj: dict, fmt: str, line: int) -> EvalSample:
    for key in ("id", "question", "gold"):
        if key not in obj:
            raise SchemaError(f"missing field {key!r}", line)
    if fmt == "jsonl_specialized":
        task = obj.get("task")
        if task not in SPECIALIZED_TASKS:
            raise SchemaError(
                f"task must be one of {', '.join(SPECIALIZED_TASKS)}; got {task!r}", line)
        return EvalSample(
            id=str(obj["id"]),
            family="specialized",
            task=task,
            question=str(obj["question"]),
            gold=str(obj["gold"]),
        )
    options = obj.get("options")
    if not isinstance(options, dict) or not 2 <= len(options) <= 10:
        raise SchemaError("options must map 2 to 10 letters to texts", line)
    bad = [k for k in options if k not in OPTION_LETTERS]
    if bad:
        raise SchemaError(f"option letters must be A-J; got {bad}", line)
    if str(obj["gold"]) not in options:
        raise SchemaError(f"gold {obj['gold']!r} is not an option letter", line)
    return EvalSample(
        id=str(obj["id"]),
        family="exam",
        task=MCQ_TASK,
        question=str(obj["question"]),
        gold=str(obj["gold"]),
        options={k: str(v) for k, v in options.items()},
    )


def load_dataset(path: str | Path, fmt: str = "jsonl_specialized") -> list[EvalSample]:
    if fmt not in ("jsonl_specialized", "jsonl_mcq"):
        raise ValueError(f"unknown dataset format {fmt!r}")
    samples: list[EvalSample] = []
    seen: set[str] = set()
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON ({exc.msg})", line_no) from None
        if not isinstance(obj, dict):
            raise SchemaError("each line must be a JSON object", line_no)
        try:
            sample = _parse_line(obj, fmt, line_no)
        except ValueError as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(str(exc), line_no) from None
        if sample.id in seen:
            raise DuplicateId(f"duplicate sample id {sample.id!r}", line_no)
        seen.add(sample.id)
        samples.append(sample)
    return samples


def subsample(samples: list[EvalSample], k: int, seed: int) -> list[EvalSample]:
    """Seeded per-task subsample of size k (whole task kept when smaller)."""
    by_task: dict[str, list[EvalSample]] = {}
    for s in samples:
        by_task.setdefault(s.task, []).append(s)
    rng = random.Random(seed)
    picked: list[EvalSample] = []
    for task in sorted(by_task):
        pool = sorted(by_task[task], key=lambda s: s.id)
        picked.extend(pool if len(pool) <= k else rng.sample(pool, k))
    return sorted(picked, key=lambda s: s.id)
