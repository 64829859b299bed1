"""Web search client backed by a summarizing search service, with replay."""

from __future__ import annotations

import json
import os

from molagent.clients.fixtures import FixtureMissing, FixtureStore
from molagent.clients.transport import NetworkError, Transport, http_request


class NoResults(LookupError):
    pass


class WebSearchClient:
    MODES = ("live", "replay", "record")

    def __init__(
        self,
        mode: str = "replay",
        fixtures: FixtureStore | None = None,
        endpoint: str = "https://api.tavily.com/search",
        api_key_env: str = "MOLAGENT_SEARCH_API_KEY",
        transport: Transport = http_request,
    ):
        if mode not in self.MODES:
            raise ValueError(f"mode must be one of {self.MODES}")
        if mode in ("replay", "record") and fixtures is None:
            raise ValueError(f"{mode} mode needs a fixture store")
        if mode in ("live", "record") and not os.environ.get(api_key_env):
            # Misconfiguration surfaces at construction, not at call time.
            raise NetworkError(f"live web search needs ${api_key_env} set")
        self.mode = mode
        self.fixtures = fixtures
        self.endpoint = endpoint
        self.api_key_env = api_key_env
        self.transport = transport

    @staticmethod
    def _key(query: str) -> str:
        return "websearch:" + " ".join(query.lower().split())

    def search(self, query: str) -> dict:
        """Returns {'summary': text, 'sources': [url, ...]}."""
        if not query.strip():
            raise NoResults("empty query")
        key = self._key(query)
        if self.mode == "replay":
            try:
                return self.fixtures.get(key)
            except FixtureMissing:
                raise NetworkError(f"no recorded search for {query!r}") from None
        result = self._live(query)
        if self.mode == "record":
            self.fixtures.put(key, result)
        return result

    def _live(self, query: str) -> dict:
        status, text = self.transport(
            "POST",
            self.endpoint,
            json_body={
                "query": query,
                "api_key": os.environ.get(self.api_key_env, ""),
                "include_answer": True,
            },
            timeout=30.0,
        )
        if status >= 400:
            raise NetworkError(f"search service returned {status}")
        payload = json.loads(text)
        summary = payload.get("answer") or ""
        sources = [r.get("url", "") for r in payload.get("results", []) if r.get("url")]
        if not summary and not sources:
            raise NoResults(f"search produced nothing for {query!r}")
        return {"summary": summary, "sources": sources}
