"""Response cache keyed by normalized request, with observable hit counters."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path


class ResponseCache:
    """In-memory cache, optionally persisted as one JSON file per response."""

    def __init__(self, directory: str | Path | None = None):
        self.directory = Path(directory) if directory else None
        self._memory: dict[str, object] = {}
        self.hits = 0
        self.misses = 0

    def _path(self, key: str) -> Path:
        assert self.directory is not None
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()[:24]
        return self.directory / f"{digest}.json"

    def get(self, key: str):
        if key in self._memory:
            self.hits += 1
            return self._memory[key]
        if self.directory is not None:
            path = self._path(key)
            if path.exists():
                value = json.loads(path.read_text(encoding="utf-8"))["response"]
                self._memory[key] = value
                self.hits += 1
                return value
        self.misses += 1
        return None

    def put(self, key: str, value) -> None:
        self._memory[key] = value
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            self._path(key).write_text(
                json.dumps({"key": key, "response": value}, sort_keys=True, ensure_ascii=False),
                encoding="utf-8",
            )
