"""Prompt assembly for agent and bare-model runs.

Templates and few-shot exemplars are versioned data files, not code
constants.  Rendering is deterministic given (template, task, trace so
far); exemplar order is shuffled with a seed derived from the run seed and
the task text, so each sample sees its own stable ordering.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from importlib import resources

from molagent.agent.parsing import ANSWER_MODES, FREE
from molagent.toolkit.registry import ToolRegistry

FAMILIES = ("specialized", "exam")


def _load_json(name: str) -> dict:
    return json.loads(resources.files("molagent.data").joinpath(name).read_text())


@dataclass
class PromptTemplate:
    version: str
    react: dict
    bare: dict
    exemplars: dict[str, list[dict]]

    @classmethod
    def default(cls) -> "PromptTemplate":
        templates = _load_json("prompt_templates.json")
        exemplars = _load_json("fewshot_exemplars.json")["families"]
        return cls(
            version=templates["version"],
            react=templates["react"],
            bare=templates["bare"],
            exemplars=exemplars,
        )

    # -- shared pieces ------------------------------------------------------

    def _answer_format(self, section: dict, answer_mode: str) -> str:
        return section["answer_formats"].get(answer_mode, "")

    def _pick_exemplars(self, family: str, shots: int, seed: int, task: str) -> list[dict]:
        if shots <= 0:
            return []
        pool = list(self.exemplars.get(family, ()))[:shots]
        digest = hashlib.sha256(f"{seed}:{task}".encode("utf-8")).hexdigest()
        random.Random(int(digest[:12], 16)).shuffle(pool)
        return pool

    @staticmethod
    def render_catalog(registry: ToolRegistry) -> str:
        lines = ["Available tools:"]
        for d in registry.descriptors:
            lines.append(f"- {d.name} ({d.category}): {d.description}")
        return "\n".join(lines)

    # -- agent prompt -------------------------------------------------------

    def render_agent(
        self,
        task: str,
        registry: ToolRegistry,
        steps: list,
        shots: int = 0,
        seed: int = 0,
        answer_mode: str = FREE,
        family: str = "exam",
    ) -> tuple[str, str]:
        """(system text, user text) for the next completion request."""
        if answer_mode not in ANSWER_MODES:
            raise ValueError(f"answer_mode must be one of {ANSWER_MODES}")
        parts = [self.render_catalog(registry)]
        parts.append(
            self.react["instructions"].replace(
                "{answer_format}", self._answer_format(self.react, answer_mode)
            )
        )
        exemplars = self._pick_exemplars(family, shots, seed, task)
        if exemplars:
            blocks = [self.react["examples_header"]]
            for ex in exemplars:
                blocks.append(f"Question: {ex['question']}\n{ex['solution']}")
            parts.append("\n\n".join(blocks))
        scratchpad = [f"Question: {task}"]
        for step in steps:
            scratchpad.append(f"Thought: {step.thought}")
            if step.action is not None:
                scratchpad.append(f"Tool: {step.action.tool_name}")
                scratchpad.append(f"Tool input: {step.action.raw_input}")
                scratchpad.append(f"Observation: {step.observation.output}")
        parts.append("\n".join(scratchpad))
        return self.react["system"], "\n\n".join(parts)

    # -- bare-model prompt ---------------------------------------------------

    def render_bare(
        self,
        task: str,
        shots: int = 0,
        seed: int = 0,
        answer_mode: str = FREE,
        family: str = "exam",
    ) -> tuple[str, str]:
        parts = [
            self.bare["instructions"].replace(
                "{answer_format}", self._answer_format(self.bare, answer_mode)
            )
        ]
        exemplars = self._pick_exemplars(family, shots, seed, task)
        if exemplars:
            blocks = [self.bare["examples_header"]]
            for ex in exemplars:
                blocks.append(f"Question: {ex['question']}\n{ex['solution']}")
            parts.append("\n\n".join(blocks))
        parts.append(f"Question: {task}")
        return self.bare["system"], "\n\n".join(parts)
