"""Benchmark runner: agent-mode and bare-model evaluation with repeats.

Per-sample backend failures are recorded as unanswered; the run always
completes.  Repeats produce one report each plus a cell-averaged report.
Samples may run concurrently (each run owns its chat session and trace);
aggregation folds over sorted sample ids, so reports are order-independent.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from molagent.agent.loop import AgentRunConfig, run_agent
from molagent.agent.model import ANSWERED, AgentTrace
from molagent.agent.parsing import FREE, MCQ_LETTER, TAGGED
from molagent.agent.prompts import PromptTemplate
from molagent.clients.chat import ChatBackend, ChatError
from molagent.evaluation.datasets import EvalSample, MCQ_TASK
from molagent.evaluation.metrics import MetricReport, average_reports, score_batch
from molagent.toolkit.registry import ToolRegistry

ChatFactory = Callable[[EvalSample, int], ChatBackend]


def answer_mode_for(sample: EvalSample) -> str:
    return MCQ_LETTER if sample.task == MCQ_TASK else TAGGED


@dataclass(frozen=True)
class BenchmarkConfig:
    mode: str = "agent"  # 'agent' | 'bare'
    repeats: int = 1
    shots: int = 0
    seed: int = 0
    max_steps: int = 15
    jobs: int = 1

    def __post_init__(self):
        if self.mode not in ("agent", "bare"):
            raise ValueError("mode must be 'agent' or 'bare'")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")


@dataclass
class BenchmarkResult:
    per_repeat: list[MetricReport]
    average: MetricReport
    traces: list[AgentTrace] = field(default_factory=list)
    records: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "repeats": [r.to_dict() for r in self.per_repeat],
            "average": self.average.to_dict(),
            "records": self.records,
        }


def run_benchmark(
    samples: list[EvalSample],
    registry: ToolRegistry | None,
    chat_factory: ChatFactory,
    config: BenchmarkConfig = BenchmarkConfig(),
    template: PromptTemplate | None = None,
) -> BenchmarkResult:
    if config.mode == "agent" and registry is None:
        raise ValueError("agent mode needs a tool registry")
    template = template or PromptTemplate.default()
    ordered = sorted(samples, key=lambda s: s.id)

    result = BenchmarkResult(per_repeat=[], average=MetricReport())
    for repeat in range(config.repeats):
        answers: dict[str, str | None] = {}

        def evaluate(sample: EvalSample) -> tuple[str, str | None, AgentTrace | None, dict]:
            backend = chat_factory(sample, repeat)
            record = {"sample_id": sample.id, "repeat": repeat}
            if config.mode == "agent":
                trace = run_agent(
                    sample.rendered_question(),
                    registry,
                    backend,
                    AgentRunConfig(
                        max_steps=config.max_steps,
                        shots=config.shots,
                        seed=config.seed,
                        answer_mode=answer_mode_for(sample),
                        family=sample.family,
                    ),
                    template=template,
                    task_id=sample.id,
                    task_label=sample.task,
                )
                answer = trace.final_answer if trace.status == ANSWERED else None
                record["status"] = trace.status
                record["answer"] = answer
                return sample.id, answer, trace, record
            system, user = template.render_bare(
                sample.rendered_question(),
                shots=config.shots,
                seed=config.seed,
                answer_mode=answer_mode_for(sample),
                family=sample.family,
            )
            try:
                exchange = backend.chat(
                    [
                        {"role": "system", "content": system},
                        {"role": "user", "content": user},
                    ]
                )
            except ChatError as exc:
                record["status"] = "backend_error"
                record["answer"] = None
                record["error"] = str(exc)
                return sample.id, None, None, record
            record["status"] = "answered"
            record["answer"] = exchange.response
            return sample.id, exchange.response, None, record

        if config.jobs > 1:
            with ThreadPoolExecutor(max_workers=config.jobs) as pool:
                outcomes = list(pool.map(evaluate, ordered))
        else:
            outcomes = [evaluate(s) for s in ordered]

        for sample_id, answer, trace, record in sorted(outcomes, key=lambda t: t[0]):
            answers[sample_id] = answer
            if trace is not None:
                result.traces.append(trace)
            result.records.append(record)

        report = score_batch(ordered, answers)
        report.metadata = {
            "repeat": repeat,
            "mode": config.mode,
            "shots": config.shots,
            "seed": config.seed,
            "samples": len(ordered),
        }
        result.per_repeat.append(report)

    result.average = average_reports(result.per_repeat)
    result.average.metadata.update(
        {"mode": config.mode, "shots": config.shots, "seed": config.seed,
         "samples": len(ordered)}
    )
    return result
