"""Benchmark metrics and per-task aggregation.

Conventions: unanswered samples count as incorrect for EM/Accuracy/FTS (they
stay in the denominator).  RMSE is computed over the numerically parseable
answers, with the unanswered count reported alongside.  ``caption_overlap``
is a documented stand-in for a full captioning metric: unigram F1 over
lowercased whitespace tokens; reports label it non-comparable to published
captioning scores.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

from molagent.agent.parsing import MCQ_LETTER, NoAnswerFound, extract_answer
from molagent.analysis import DEFAULT_NBITS, DEFAULT_RADIUS, fingerprint, tanimoto
from molagent.evaluation.datasets import (
    BINARY_TASKS,
    EvalSample,
    MCQ_TASK,
    NUMERIC_TASKS,
    SMILES_OUTPUT_TASKS,
)
from molagent.molgraph import CONSTITUTION, SmilesParseError, canonical_smiles, parse_smiles

CAPTION_NOTE = (
    "caption_overlap is a unigram token-F1 stand-in and is NOT comparable to "
    "published METEOR captioning scores"
)


class MissingAnswer(KeyError):
    pass


def is_valid_smiles(text: str) -> bool:
    try:
        parse_smiles(text.strip())
        return True
    except (SmilesParseError, Exception):
        return False


def score_em(prediction: str, gold: str, mode: str = CONSTITUTION) -> int:
    """1 iff the prediction parses and matches the gold molecule."""
    gold_canon = canonical_smiles(parse_smiles(gold.strip()), mode)
    try:
        pred_canon = canonical_smiles(parse_smiles(prediction.strip()), mode)
    except SmilesParseError:
        return 0
    return int(pred_canon == gold_canon)


def score_fts(
    prediction: str,
    gold: str,
    radius: int = DEFAULT_RADIUS,
    nbits: int = DEFAULT_NBITS,
) -> float:
    """Fingerprint Tanimoto similarity as a percentage; 0 for invalid input."""
    gold_fp = fingerprint(parse_smiles(gold.strip()), radius, nbits)
    try:
        pred_fp = fingerprint(parse_smiles(prediction.strip()), radius, nbits)
    except SmilesParseError:
        return 0.0
    return 100.0 * tanimoto(pred_fp, gold_fp)


def caption_overlap(prediction: str, gold: str) -> float:
    """Unigram F1 over lowercased whitespace tokens, as a percentage."""
    pred_tokens = prediction.lower().split()
    gold_tokens = gold.lower().split()
    if not pred_tokens or not gold_tokens:
        return 0.0
    common = 0
    remaining = {}
    for t in gold_tokens:
        remaining[t] = remaining.get(t, 0) + 1
    for t in pred_tokens:
        if remaining.get(t, 0) > 0:
            remaining[t] -= 1
            common += 1
    if common == 0:
        return 0.0
    precision = common / len(pred_tokens)
    recall = common / len(gold_tokens)
    return 100.0 * 2 * precision * recall / (precision + recall)


_FLOAT_RE = re.compile(r"-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")


def parse_numeric(text: str) -> float | None:
    try:
        return float(text.strip())
    except ValueError:
        m = _FLOAT_RE.search(text)
        return float(m.group(0)) if m else None


def parse_binary(text: str) -> bool | None:
    """Yes/No normalization; probabilities are thresholded at 0.5."""
    cleaned = text.strip().strip(".").strip().lower()
    if cleaned.startswith("yes"):
        return True
    if cleaned.startswith("no"):
        return False
    value = parse_numeric(text)
    if value is not None and 0.0 <= value <= 1.0:
        return value >= 0.5
    return None


@dataclass
class MetricReport:
    per_task: dict[str, dict[str, float]] = field(default_factory=dict)
    counts: dict[str, dict[str, int]] = field(default_factory=dict)
    params: dict[str, object] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    metadata: dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "per_task": self.per_task,
            "counts": self.counts,
            "params": self.params,
            "notes": self.notes,
            "metadata": self.metadata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    def to_table(self) -> str:
        lines = []
        header = f"{'task':<12} {'metric':<16} {'value':>10}  {'n':>4} {'unanswered':>10}"
        lines.append(header)
        lines.append("-" * len(header))
        for task in sorted(self.per_task):
            counts = self.counts.get(task, {})
            for metric in sorted(self.per_task[task]):
                value = self.per_task[task][metric]
                lines.append(
                    f"{task:<12} {metric:<16} {value:>10.3f}  "
                    f"{counts.get('total', 0):>4} {counts.get('unanswered', 0):>10}"
                )
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines)


def score_batch(
    samples: list[EvalSample],
    answers: dict[str, str | None],
    strict: bool = False,
    fingerprint_radius: int = DEFAULT_RADIUS,
    fingerprint_nbits: int = DEFAULT_NBITS,
) -> MetricReport:
    """Aggregate per-task metrics over a run's answers (keyed by sample id)."""
    by_task: dict[str, list[EvalSample]] = {}
    for s in samples:
        by_task.setdefault(s.task, []).append(s)

    report = MetricReport(
        params={
            "fingerprint_radius": fingerprint_radius,
            "fingerprint_nbits": fingerprint_nbits,
        }
    )
    for task in sorted(by_task):
        rows = sorted(by_task[task], key=lambda s: s.id)
        answered: list[tuple[EvalSample, str]] = []
        unanswered = 0
        for s in rows:
            if s.id not in answers and strict:
                raise MissingAnswer(f"no answer recorded for sample {s.id!r}")
            answer = answers.get(s.id)
            if answer is None or not str(answer).strip():
                unanswered += 1
            else:
                answered.append((s, str(answer)))

        metrics: dict[str, float] = {}
        counts = {"total": len(rows), "answered": len(answered), "unanswered": unanswered}

        if task in SMILES_OUTPUT_TASKS:
            wanted = rows[0].metric_keys
            em = invalid = 0
            fts_total = 0.0
            for s, ans in answered:
                if not is_valid_smiles(ans):
                    invalid += 1
                    continue
                em += score_em(ans, s.gold)
                fts_total += score_fts(ans, s.gold, fingerprint_radius, fingerprint_nbits)
            counts["invalid"] = invalid + unanswered  # unanswered is not a valid molecule
            n = len(rows)
            if "EM" in wanted:
                metrics["EM"] = 100.0 * em / n
            if "FTS" in wanted:
                metrics["FTS"] = fts_total / n
            if "Validity" in wanted:
                metrics["Validity"] = 100.0 * (len(answered) - invalid) / n
        elif task in NUMERIC_TASKS:
            pairs = []
            unparseable = 0
            for s, ans in answered:
                value = parse_numeric(ans)
                if value is None:
                    unparseable += 1
                else:
                    pairs.append((value, float(s.gold)))
            counts["unparseable"] = unparseable
            if pairs:
                metrics["RMSE"] = rmse(pairs)
        elif task in BINARY_TASKS or task == MCQ_TASK:
            correct = 0
            for s, ans in answered:
                if task == MCQ_TASK:
                    try:
                        letter = extract_answer(ans, MCQ_LETTER)
                    except NoAnswerFound:
                        continue
                    correct += int(letter == s.gold)
                else:
                    value = parse_binary(ans)
                    gold = parse_binary(s.gold)
                    if value is not None and value == gold:
                        correct += 1
            metrics["Accuracy"] = 100.0 * correct / len(rows)
        elif task == "MC":
            total = sum(caption_overlap(ans, s.gold) for s, ans in answered)
            metrics["caption_overlap"] = total / len(rows)
            if CAPTION_NOTE not in report.notes:
                report.notes.append(CAPTION_NOTE)
        else:  # text-output tasks: formulas and names
            em = 0
            for s, ans in answered:
                em += int(_norm_text(ans, task) == _norm_text(s.gold, task))
            metrics["EM"] = 100.0 * em / len(rows)

        report.per_task[task] = metrics
        report.counts[task] = counts
    return report


def _norm_text(text: str, task: str) -> str:
    cleaned = text.strip()
    # Names compare case-insensitively; formulas are case-sensitive.
    return cleaned if task.endswith("2F") else cleaned.lower()


def rmse(pairs: list[tuple[float, float]]) -> float:
    if not pairs:
        raise ValueError("RMSE needs at least one pair")
    return math.sqrt(sum((p - g) ** 2 for p, g in pairs) / len(pairs))


def accuracy(flags: list[bool]) -> float:
    if not flags:
        raise ValueError("accuracy needs at least one sample")
    return 100.0 * sum(flags) / len(flags)


def average_reports(reports: list[MetricReport]) -> MetricReport:
    """Cell-wise mean over per-repeat reports (the k-repeat average)."""
    if not reports:
        raise ValueError("nothing to average")
    out = MetricReport(
        params=dict(reports[0].params),
        notes=list(reports[0].notes),
        metadata={"averaged_over": len(reports)},
    )
    for task in sorted({t for r in reports for t in r.per_task}):
        cells: dict[str, float] = {}
        for metric in sorted({m for r in reports for m in r.per_task.get(task, {})}):
            values = [
                r.per_task[task][metric]
                for r in reports
                if metric in r.per_task.get(task, {})
            ]
            cells[metric] = sum(values) / len(values)
        out.per_task[task] = cells
        out.counts[task] = dict(reports[0].counts.get(task, {}))
    return out
