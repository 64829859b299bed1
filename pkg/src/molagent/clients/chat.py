"""Chat-completion backends: remote JSON-over-HTTP, scripted, and rule-based.

Scripted backends pop responses from a programmed sequence and fail loudly
on exhaustion, which keeps agent tests honest.  All backends honor stop
sequences by truncating the response before the first occurrence.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from molagent.clients.transport import NetworkError, Transport, http_request


class ChatError(RuntimeError):
    pass


class ScriptExhausted(ChatError):
    """A scripted backend ran out of programmed responses."""


class RemoteChatError(ChatError):
    def __init__(self, status: int, body: str):
        super().__init__(f"chat endpoint returned {status}: {body[:200]}")
        self.status = status


@dataclass(frozen=True)
class ChatExchange:
    messages: tuple[dict, ...]
    response: str
    usage: dict[str, int]
    backend_id: str


def apply_stop(text: str, stop: Sequence[str] | None) -> str:
    if not stop:
        return text
    cut = len(text)
    for s in stop:
        pos = text.find(s)
        if pos != -1:
            cut = min(cut, pos)
    return text[:cut]


def _rough_tokens(text: str) -> int:
    return len(text.split())


class ChatBackend:
    backend_id = "chat"

    def chat(
        self,
        messages: list[dict],
        temperature: float = 0.0,
        max_tokens: int | None = None,
        stop: Sequence[str] | None = None,
    ) -> ChatExchange:
        raise NotImplementedError

    def _exchange(self, messages: list[dict], response: str) -> ChatExchange:
        if not response:
            raise ChatError("backend produced an empty response")
        return ChatExchange(
            messages=tuple(dict(m) for m in messages),
            response=response,
            usage={
                "prompt_tokens": sum(_rough_tokens(m.get("content", "")) for m in messages),
                "completion_tokens": _rough_tokens(response),
            },
            backend_id=self.backend_id,
        )


class ScriptedChatBackend(ChatBackend):
    """Replays a fixed response sequence; one session per agent run."""

    def __init__(self, responses: Sequence[str], backend_id: str = "scripted"):
        self.backend_id = backend_id
        self._responses = list(responses)
        self._cursor = 0
        self.calls: list[tuple[tuple[dict, ...], dict]] = []

    def chat(self, messages, temperature=0.0, max_tokens=None, stop=None) -> ChatExchange:
        self.calls.append(
            (tuple(dict(m) for m in messages),
             {"temperature": temperature, "max_tokens": max_tokens, "stop": tuple(stop or ())})
        )
        if self._cursor >= len(self._responses):
            raise ScriptExhausted(
                f"script exhausted after {len(self._responses)} responses")
        response = self._responses[self._cursor]
        self._cursor += 1
        return self._exchange(messages, apply_stop(response, stop))

    @property
    def remaining(self) -> int:
        return len(self._responses) - self._cursor


class RuleChatBackend(ChatBackend):
    """Answers every prompt with a fixed text or a function of the messages."""

    def __init__(self, rule: str | Callable[[list[dict]], str], backend_id: str = "rule"):
        self.backend_id = backend_id
        self._rule = rule

    def chat(self, messages, temperature=0.0, max_tokens=None, stop=None) -> ChatExchange:
        response = self._rule(messages) if callable(self._rule) else self._rule
        return self._exchange(messages, apply_stop(response, stop))


@dataclass
class HttpChatBackend(ChatBackend):
    """JSON chat-completion client compatible with the common wire format.

    Retries transient failures (5xx and transport errors) with exponential
    backoff; never retries 4xx.
    """

    endpoint: str
    model: str
    api_key_env: str = "MOLAGENT_API_KEY"
    auth_header: str = "Authorization"
    auth_scheme: str = "Bearer"
    max_retries: int = 3
    timeout: float = 60.0
    transport: Transport = field(default=http_request, repr=False)
    sleep: Callable[[float], None] = field(default=time.sleep, repr=False)

    @property
    def backend_id(self) -> str:  # type: ignore[override]
        return self.model

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env, "")
        if key:
            value = f"{self.auth_scheme} {key}" if self.auth_scheme else key
            headers[self.auth_header] = value
        return headers

    def chat(self, messages, temperature=0.0, max_tokens=None, stop=None) -> ChatExchange:
        body = {"model": self.model, "messages": list(messages), "temperature": temperature}
        if max_tokens is not None:
            body["max_tokens"] = max_tokens
        if stop:
            body["stop"] = list(stop)
        delay = 0.5
        last_error: Exception | None = None
        for attempt in range(self.max_retries + 1):
            try:
                status, text = self.transport(
                    "POST", self.endpoint, json_body=body,
                    headers=self._headers(), timeout=self.timeout,
                )
            except NetworkError as exc:
                last_error = exc
                if attempt == self.max_retries:
                    raise ChatError(str(exc)) from exc
                self.sleep(delay)
                delay *= 2
                continue
            if 200 <= status < 300:
                payload = json.loads(text)
                content = payload["choices"][0]["message"]["content"]
                usage = payload.get("usage", {})
                exchange = self._exchange(messages, apply_stop(content, stop))
                if usage:
                    return ChatExchange(exchange.messages, exchange.response,
                                        dict(usage), self.backend_id)
                return exchange
            if 400 <= status < 500:
                raise RemoteChatError(status, text)
            last_error = RemoteChatError(status, text)
            if attempt == self.max_retries:
                raise last_error
            self.sleep(delay)
            delay *= 2
        raise ChatError(str(last_error))
