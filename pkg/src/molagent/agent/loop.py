"""The ReAct orchestration loop: prompt, complete, parse, act, observe.

One run is strictly sequential.  Every raw completion is stored verbatim in
the trace; tool outcomes land in the scratchpad exactly as returned, and the
stop sequence keeps the model from writing its own Observation lines.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from molagent.agent.model import (
    ANSWERED,
    AgentStep,
    AgentTrace,
    BACKEND_ERROR,
    ConfigSnapshot,
    MAX_STEPS,
)
from molagent.agent.parsing import FREE, parse_completion
from molagent.agent.prompts import PromptTemplate
from molagent.clients.chat import ChatBackend, ChatError
from molagent.toolkit.registry import ToolRegistry

DEFAULT_MAX_STEPS = 15
OBSERVATION_STOP = "Observation:"


@dataclass(frozen=True)
class AgentRunConfig:
    max_steps: int = DEFAULT_MAX_STEPS
    shots: int = 0
    seed: int = 0
    answer_mode: str = FREE
    family: str = "exam"
    temperature: float = 0.0
    stop: tuple[str, ...] = (OBSERVATION_STOP,)


def run_agent(
    task: str,
    registry: ToolRegistry,
    chat_backend: ChatBackend,
    config: AgentRunConfig = AgentRunConfig(),
    template: PromptTemplate | None = None,
    task_id: str | None = None,
    task_label: str | None = None,
) -> AgentTrace:
    """Run the Thought/Action/Observation loop until an answer or the cap."""
    template = template or PromptTemplate.default()
    snapshot = ConfigSnapshot(
        model_id=chat_backend.backend_id,
        registry_hash=registry.registry_hash(),
        shots=config.shots,
        seed=config.seed,
        max_steps=config.max_steps,
    )
    steps: list[AgentStep] = []

    def trace(status: str, final_answer: str | None = None, error: str | None = None):
        return AgentTrace(
            task=task,
            steps=tuple(steps),
            final_answer=final_answer,
            status=status,
            config=snapshot,
            task_id=task_id,
            task_label=task_label,
            error=error,
        )

    for index in range(1, config.max_steps + 1):
        system, user = template.render_agent(
            task,
            registry,
            steps,
            shots=config.shots,
            seed=config.seed,
            answer_mode=config.answer_mode,
            family=config.family,
        )
        messages = [
            {"role": "system", "content": system},
            {"role": "user", "content": user},
        ]
        try:
            exchange = chat_backend.chat(
                messages, temperature=config.temperature, stop=config.stop
            )
        except ChatError as exc:
            return trace(BACKEND_ERROR, error=str(exc))
        parsed = parse_completion(exchange.response)
        if parsed.action is not None:
            outcome = registry.invoke(parsed.action)
            steps.append(
                AgentStep(index, parsed.thought, exchange.response, parsed.action, outcome)
            )
            continue
        steps.append(AgentStep(index, parsed.thought, exchange.response))
        return trace(ANSWERED, final_answer=parsed.final_answer or "")
    return trace(MAX_STEPS)
