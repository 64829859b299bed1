"""Shipped demo transcripts: scripted agent sessions that replay offline.

Each transcript bundles a task, the scripted completions, and the registry
configuration it needs; the fixtures it touches ship with the package, so a
replay makes zero network calls.  Golden projections (step count, tool
names, tool inputs/outputs, final answer) are frozen next to them and the
test suite diffs replays against the goldens byte for byte.
"""

from __future__ import annotations

import json
from importlib import resources

from molagent.agent import AgentRunConfig, AgentTrace, run_agent
from molagent.clients import ScriptedChatBackend
from molagent.toolkit import build_registry


def _data(*parts: str):
    node = resources.files("molagent.data")
    for part in parts:
        node = node.joinpath(part)
    return node


def transcript_names() -> list[str]:
    return sorted(
        p.name.removesuffix(".json")
        for p in _data("transcripts").iterdir()
        if p.name.endswith(".json")
    )


def load_transcript(name: str) -> dict:
    return json.loads(_data("transcripts", f"{name}.json").read_text())


def replay_transcript(name: str, fixture_dir: str | None = None) -> AgentTrace:
    """Run a transcript's scripted session through the real agent loop."""
    data = load_transcript(name)
    registry_config = dict(data.get("registry_config", {}))
    if fixture_dir:
        registry_config["fixture_dir"] = fixture_dir
    registry = build_registry(registry_config)
    backend = ScriptedChatBackend(list(data["completions"]), backend_id="scripted-replay")
    return run_agent(
        data["task"],
        registry,
        backend,
        AgentRunConfig(answer_mode=data["answer_mode"], family=data["family"]),
        task_id=data["name"],
        task_label=data["task_label"],
    )


def golden_projection(name: str) -> dict:
    return json.loads(_data("golden", f"{name}.json").read_text())


def projection_json(projection: dict) -> str:
    return json.dumps(projection, indent=2, sort_keys=True, ensure_ascii=False)
