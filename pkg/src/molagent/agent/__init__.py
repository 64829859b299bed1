"""ReAct agent: trace model, completion parsing, prompts, and the run loop."""

from molagent.agent.loop import (
    AgentRunConfig,
    DEFAULT_MAX_STEPS,
    OBSERVATION_STOP,
    run_agent,
)
from molagent.agent.model import (
    ANSWERED,
    AgentStep,
    AgentTrace,
    BACKEND_ERROR,
    ConfigSnapshot,
    MAX_STEPS,
    SCHEMA_VERSION,
)
from molagent.agent.parsing import (
    ANSWER_MODES,
    FREE,
    MCQ_LETTER,
    NoAnswerFound,
    ParsedCompletion,
    TAGGED,
    extract_answer,
    parse_completion,
)
from molagent.agent.prompts import FAMILIES, PromptTemplate

__all__ = [
    "ANSWERED",
    "ANSWER_MODES",
    "AgentRunConfig",
    "AgentStep",
    "AgentTrace",
    "BACKEND_ERROR",
    "ConfigSnapshot",
    "DEFAULT_MAX_STEPS",
    "FAMILIES",
    "FREE",
    "MAX_STEPS",
    "MCQ_LETTER",
    "NoAnswerFound",
    "OBSERVATION_STOP",
    "ParsedCompletion",
    "PromptTemplate",
    "SCHEMA_VERSION",
    "TAGGED",
    "extract_answer",
    "parse_completion",
    "run_agent",
]
