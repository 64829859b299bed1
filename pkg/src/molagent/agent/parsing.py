"""Completion parsing and answer extraction.

``parse_completion`` is total: every completion maps to a thought plus
either an action or a final answer.  Detection precedence (high to low):
``<ANSWER>`` tags, a tool action, a ``Final Answer:`` marker, the phrase
``the answer is``, then the trailing text of the completion.  Weak markers
never preempt an action, so "the answer is probably X, let me verify" in a
thought does not end the run.  Malformed action sections still produce an
action with the raw input preserved and a parse note attached, keeping
grounding mistakes observable downstream.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from molagent.toolkit.registry import ToolCall

TAGGED = "tagged"
MCQ_LETTER = "mcq_letter"
FREE = "free"
ANSWER_MODES = (TAGGED, MCQ_LETTER, FREE)


class NoAnswerFound(ValueError):
    """No answer could be extracted; callers bucket this as unanswered."""


@dataclass(frozen=True)
class ParsedCompletion:
    thought: str
    action: ToolCall | None = None
    final_answer: str | None = None


_TAG_RE = re.compile(r"<ANSWER>(.*?)</ANSWER>", re.DOTALL | re.IGNORECASE)
_TOOL_RE = re.compile(r"^[ \t]*(?:Tool|Action)[ \t]*:[ \t]*(.*)$", re.MULTILINE)
_TOOL_INPUT_RE = re.compile(
    r"^[ \t]*(?:Tool input|Action input|Input)[ \t]*:[ \t]*", re.MULTILINE | re.IGNORECASE
)
_FINAL_RE = re.compile(r"^[ \t]*(?:Final answer|Answer)[ \t]*:[ \t]*", re.MULTILINE | re.IGNORECASE)
_ANSWER_IS_RE = re.compile(r"the answer is[:\s]*", re.IGNORECASE)
_THOUGHT_RE = re.compile(r"^[ \t]*Thought[ \t]*:[ \t]*", re.MULTILINE)


def _extract_thought(text: str, boundary: int) -> str:
    """Thought text: after a 'Thought:' label if present, up to `boundary`."""
    head = text[:boundary] if boundary >= 0 else text
    m = _THOUGHT_RE.search(head)
    if m:
        return head[m.end():].strip()
    return head.strip()


def parse_completion(text: str) -> ParsedCompletion:
    text = text or ""

    tag = None
    for tag in _TAG_RE.finditer(text):
        pass  # keep the last occurrence
    if tag is not None:
        return ParsedCompletion(
            thought=_extract_thought(text, tag.start()),
            final_answer=tag.group(1).strip(),
        )

    tool_match = _TOOL_RE.search(text)
    if tool_match is not None:
        tool_name = tool_match.group(1).strip().rstrip(".,")
        input_match = _TOOL_INPUT_RE.search(text, tool_match.end())
        if input_match is not None:
            raw_input = text[input_match.end():].strip("\n").rstrip()
            note = None
        else:
            raw_input = text[tool_match.end():].strip()
            note = "tool input section missing; using the text after the tool name"
        if not tool_name:
            note = "empty tool name in the action section"
        return ParsedCompletion(
            thought=_extract_thought(text, tool_match.start()),
            action=ToolCall(tool_name, raw_input, parse_note=note),
        )

    final = None
    for final in _FINAL_RE.finditer(text):
        pass
    if final is not None:
        return ParsedCompletion(
            thought=_extract_thought(text, final.start()),
            final_answer=text[final.end():].strip(),
        )

    answer_is = None
    for answer_is in _ANSWER_IS_RE.finditer(text):
        pass
    if answer_is is not None:
        return ParsedCompletion(
            thought=_extract_thought(text, answer_is.start()),
            final_answer=text[answer_is.end():].strip(),
        )

    # End-of-text heuristic: a completion without an action is terminal and
    # its last non-empty line is taken as the answer.
    stripped = text.rstrip()
    cut = stripped.rfind("\n") + 1
    answer = stripped[cut:].strip()
    return ParsedCompletion(thought=_extract_thought(text, cut), final_answer=answer)


_MCQ_RE = re.compile(
    r"\(([A-Ja-j])\)|(?:answer\s+is[:\s]+\(?([A-Ja-j])\)?(?![A-Za-z]))", re.IGNORECASE
)


def extract_answer(text: str, mode: str = FREE) -> str:
    """Normalize a final answer; raises NoAnswerFound instead of guessing."""
    if mode not in ANSWER_MODES:
        raise ValueError(f"mode must be one of {ANSWER_MODES}")
    text = text or ""
    if mode == TAGGED:
        match = None
        for match in _TAG_RE.finditer(text):
            pass
        if match is None:
            raise NoAnswerFound("no <ANSWER> tags found")
        return match.group(1).strip()
    if mode == MCQ_LETTER:
        match = None
        for match in _MCQ_RE.finditer(text):
            pass
        if match is None:
            raise NoAnswerFound("no option letter found")
        return (match.group(1) or match.group(2)).upper()
    # free
    marker = None
    for pattern in (_FINAL_RE, _ANSWER_IS_RE):
        for m in pattern.finditer(text):
            marker = m
    result = text[marker.end():].strip() if marker is not None else text.strip()
    if not result:
        raise NoAnswerFound("empty answer text")
    return result
