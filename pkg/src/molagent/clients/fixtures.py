"""Record/replay fixture store: one key file plus one response file per entry.

Entries are content-addressed by the SHA-256 of the normalized request key;
the ``.key`` file holds the raw key text (greppable, diff-friendly) and the
``.json`` file the recorded response plus metadata.  Replaying a recorded
key returns the stored response value unchanged.
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path


class FixtureMissing(KeyError):
    pass


class FixtureStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)

    def _stem(self, key: str) -> Path:
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()[:24]
        return self.root / digest

    def has(self, key: str) -> bool:
        return self._stem(key).with_suffix(".json").exists()

    def get(self, key: str):
        path = self._stem(key).with_suffix(".json")
        if not path.exists():
            raise FixtureMissing(f"no fixture recorded for key {key!r}")
        entry = json.loads(path.read_text(encoding="utf-8"))
        return entry["response"]

    def put(self, key: str, response, source: str = "live") -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        stem = self._stem(key)
        stem.with_suffix(".key").write_text(key, encoding="utf-8")
        entry = {
            "key": key,
            "response": response,
            "recorded_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "source": source,
        }
        stem.with_suffix(".json").write_text(
            json.dumps(entry, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )

    def keys(self) -> list[str]:
        if not self.root.exists():
            return []
        return sorted(
            p.read_text(encoding="utf-8") for p in self.root.glob("*.key")
        )
