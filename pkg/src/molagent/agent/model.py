"""Agent trace model and JSON serialization (schema version 1)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from molagent.toolkit.registry import ToolCall, ToolOutcome

SCHEMA_VERSION = 1

ANSWERED = "answered"
MAX_STEPS = "max_steps"
BACKEND_ERROR = "backend_error"
STATUSES = (ANSWERED, MAX_STEPS, BACKEND_ERROR)


@dataclass(frozen=True)
class ConfigSnapshot:
    """Everything needed to re-run a trace."""

    model_id: str
    registry_hash: str
    shots: int
    seed: int
    max_steps: int


@dataclass(frozen=True)
class AgentStep:
    index: int  # 1-based
    thought: str
    completion: str  # the raw model completion this step came from
    action: ToolCall | None = None
    observation: ToolOutcome | None = None

    def __post_init__(self):
        if (self.action is None) != (self.observation is None):
            raise ValueError("a step has either both action and observation or neither")


@dataclass(frozen=True)
class AgentTrace:
    task: str
    steps: tuple[AgentStep, ...]
    final_answer: str | None
    status: str
    config: ConfigSnapshot
    task_id: str | None = None
    task_label: str | None = None
    error: str | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}")
        if (self.status == ANSWERED) != (self.final_answer is not None):
            raise ValueError("answered traces carry a final answer; others do not")
        if len(self.steps) > self.config.max_steps:
            raise ValueError("more steps than the configured maximum")

    @property
    def tools_used(self) -> list[str]:
        return [s.action.tool_name for s in self.steps if s.action is not None]

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "task": self.task,
            "task_id": self.task_id,
            "task_label": self.task_label,
            "status": self.status,
            "final_answer": self.final_answer,
            "error": self.error,
            "config": {
                "model_id": self.config.model_id,
                "registry_hash": self.config.registry_hash,
                "shots": self.config.shots,
                "seed": self.config.seed,
                "max_steps": self.config.max_steps,
            },
            "steps": [
                {
                    "index": s.index,
                    "thought": s.thought,
                    "completion": s.completion,
                    "action": None
                    if s.action is None
                    else {
                        "tool_name": s.action.tool_name,
                        "raw_input": s.action.raw_input,
                        "parse_note": s.action.parse_note,
                    },
                    "observation": None
                    if s.observation is None
                    else {
                        "status": s.observation.status,
                        "output": s.observation.output,
                        "latency": s.observation.latency,
                        "provenance": s.observation.provenance,
                        "note": s.observation.note,
                    },
                }
                for s in self.steps
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AgentTrace":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported trace schema: {data.get('schema_version')!r}")
        steps = []
        for s in data["steps"]:
            action = None
            observation = None
            if s.get("action") is not None:
                a = s["action"]
                action = ToolCall(a["tool_name"], a["raw_input"], parse_note=a.get("parse_note"))
            if s.get("observation") is not None:
                o = s["observation"]
                observation = ToolOutcome(
                    status=o["status"],
                    output=o["output"],
                    latency=o.get("latency", 0.0),
                    provenance=o.get("provenance", "native"),
                    note=o.get("note"),
                )
            steps.append(
                AgentStep(s["index"], s["thought"], s.get("completion", ""), action, observation)
            )
        cfg = data["config"]
        return cls(
            task=data["task"],
            steps=tuple(steps),
            final_answer=data.get("final_answer"),
            status=data["status"],
            config=ConfigSnapshot(
                model_id=cfg["model_id"],
                registry_hash=cfg["registry_hash"],
                shots=cfg["shots"],
                seed=cfg["seed"],
                max_steps=cfg["max_steps"],
            ),
            task_id=data.get("task_id"),
            task_label=data.get("task_label"),
            error=data.get("error"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "AgentTrace":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def replay_projection(self) -> dict:
        """The stable fields compared against golden traces: step count, tool
        names, tool inputs/outputs, statuses, and the final answer."""
        return {
            "task": self.task,
            "status": self.status,
            "final_answer": self.final_answer,
            "steps": [
                {
                    "thought": s.thought,
                    "tool": None if s.action is None else s.action.tool_name,
                    "tool_input": None if s.action is None else s.action.raw_input,
                    "observation": None if s.observation is None else s.observation.output,
                    "observation_status": None
                    if s.observation is None
                    else s.observation.status,
                }
                for s in self.steps
            ],
        }
