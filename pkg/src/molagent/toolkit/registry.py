"""Tool contract and registry: descriptors, calls, outcomes, and dispatch.

``ToolRegistry.invoke`` never raises: unknown tools, malformed inputs,
backend failures, and bugs inside adapters all come back as ``ToolOutcome``
statuses so the agent can observe and react to every failure.
"""

from __future__ import annotations

import hashlib
import json
import re
import time
from dataclasses import dataclass, field

from molagent.clients.pubchem import EmptyContext, NotFound
from molagent.clients.transport import NetworkError

OK = "ok"
TOOL_ERROR = "tool_error"
INPUT_ERROR = "input_error"
NOT_FOUND = "not_found"
NETWORK_ERROR = "network_error"

CATEGORIES = ("general", "molecule", "reaction")
DETERMINISM = ("deterministic", "stochastic", "external")
PROVENANCES = ("native", "fixture", "live")


class DuplicateToolName(ValueError):
    pass


class ToolInputError(ValueError):
    """Adapter-level rejection of an input; message is shown to the agent."""

    def __init__(self, message: str, detail: str | None = None):
        super().__init__(message)
        self.detail = detail


@dataclass(frozen=True)
class ToolParam:
    name: str
    kind: str = "text"  # 'text' | 'smiles' | 'selfies'
    aliases: tuple[str, ...] = ()


@dataclass(frozen=True)
class ToolDescriptor:
    name: str
    category: str
    description: str
    params: tuple[ToolParam, ...]
    requires_network: bool
    determinism: str

    def __post_init__(self):
        if not self.name or not self.description:
            raise ValueError("descriptor needs a name and a description")
        if self.category not in CATEGORIES:
            raise ValueError(f"category must be one of {CATEGORIES}")
        if self.determinism not in DETERMINISM:
            raise ValueError(f"determinism must be one of {DETERMINISM}")
        if not self.params:
            raise ValueError("descriptor needs at least one parameter")

    def schema_text(self) -> str:
        if len(self.params) == 1:
            return f"a single '{self.params[0].name}' value"
        return " and ".join(f"'{p.name}: ...'" for p in self.params) + " on separate lines"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "category": self.category,
            "description": self.description,
            "params": [
                {"name": p.name, "kind": p.kind, "aliases": list(p.aliases)}
                for p in self.params
            ],
            "requires_network": self.requires_network,
            "determinism": self.determinism,
        }


@dataclass
class ToolCall:
    tool_name: str
    raw_input: str
    parsed_input: dict | None = None
    parse_note: str | None = None


@dataclass(frozen=True)
class ToolOutcome:
    status: str
    output: str
    latency: float = 0.0
    provenance: str = "native"
    note: str | None = None

    def __post_init__(self):
        if self.status == OK and not self.output:
            raise ValueError("an ok outcome must carry non-empty output")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"provenance must be one of {PROVENANCES}")

    @property
    def is_ok(self) -> bool:
        return self.status == OK


_LABEL_RE = re.compile(r"^\s*([A-Za-z][A-Za-z0-9 _-]*)\s*:\s*(.*)$")
_SMILES_LABEL_RE = re.compile(r"^\s*<?\s*smiles\s*>?\s*:", re.IGNORECASE)


def parse_tool_input(
    descriptor: ToolDescriptor, raw: str
) -> tuple[dict | None, str | None, str | None]:
    """Schema-lenient input parsing: (parsed, error message, note).

    A 'SMILES:' label on a single-SMILES tool is detected and reported, not
    silently stripped: the mistake must stay observable in traces.
    """
    note = None
    if len(descriptor.params) == 1:
        param = descriptor.params[0]
        value = raw.strip()
        if not value:
            return None, (
                f"Error: {descriptor.name} needs a non-empty '{param.name}' input."
            ), None
        if param.kind == "smiles" and _SMILES_LABEL_RE.match(value):
            note = ("input begins with a 'SMILES:' label; "
                    "this tool takes the bare SMILES string")
        return {param.name: value}, None, note

    alias_map: dict[str, str] = {}
    for p in descriptor.params:
        alias_map[p.name.lower()] = p.name
        for alias in p.aliases:
            alias_map[alias.lower()] = p.name
    fields: dict[str, list[str]] = {}
    current: str | None = None
    labeled_any = False
    for line in raw.splitlines():
        m = _LABEL_RE.match(line)
        label = m.group(1).strip().lower() if m else None
        if label in alias_map:
            current = alias_map[label]
            fields.setdefault(current, []).append(m.group(2))
            labeled_any = True
        elif current is not None:
            fields[current].append(line)
    parsed = {k: "\n".join(v).strip() for k, v in fields.items()}
    if not labeled_any:
        # Positional fallback: newline- or ';'-separated values in order.
        parts = [p.strip() for p in raw.splitlines() if p.strip()]
        if len(parts) != len(descriptor.params):
            parts = [p.strip() for p in raw.split(";") if p.strip()]
        if len(parts) == len(descriptor.params):
            parsed = {p.name: v for p, v in zip(descriptor.params, parts)}
    missing = [p.name for p in descriptor.params if not parsed.get(p.name)]
    if missing:
        return None, (
            f"Error: {descriptor.name} expects {descriptor.schema_text()}; "
            f"missing {', '.join(repr(m) for m in missing)}."
        ), None
    return parsed, None, None


class ToolRegistry:
    def __init__(self):
        self._descriptors: dict[str, ToolDescriptor] = {}
        self._handlers: dict[str, object] = {}

    def register(self, descriptor: ToolDescriptor, handler) -> None:
        if descriptor.name in self._descriptors:
            raise DuplicateToolName(f"tool {descriptor.name!r} already registered")
        self._descriptors[descriptor.name] = descriptor
        self._handlers[descriptor.name] = handler

    @property
    def names(self) -> list[str]:
        return sorted(self._descriptors)

    def descriptor(self, name: str) -> ToolDescriptor:
        return self._descriptors[name]

    @property
    def descriptors(self) -> list[ToolDescriptor]:
        return [self._descriptors[n] for n in self.names]

    def category_counts(self) -> dict[str, int]:
        counts = {c: 0 for c in CATEGORIES}
        for d in self._descriptors.values():
            counts[d.category] += 1
        return counts

    def catalog(self) -> list[dict]:
        return [d.to_dict() for d in self.descriptors]

    def catalog_json(self) -> str:
        return json.dumps(self.catalog(), indent=2, sort_keys=True, ensure_ascii=False)

    def registry_hash(self) -> str:
        return hashlib.sha256(self.catalog_json().encode("utf-8")).hexdigest()[:16]

    def invoke(self, call: ToolCall) -> ToolOutcome:
        start = time.perf_counter()

        def done(status, output, provenance="native", note=None):
            return ToolOutcome(
                status=status,
                output=output,
                latency=time.perf_counter() - start,
                provenance=provenance,
                note=note,
            )

        descriptor = self._descriptors.get(call.tool_name)
        if descriptor is None:
            return done(
                INPUT_ERROR,
                f"Error: Unknown tool {call.tool_name!r}. "
                f"Available tools: {', '.join(self.names)}.",
            )
        parsed, error, note = parse_tool_input(descriptor, call.raw_input)
        if error is not None:
            return done(INPUT_ERROR, error)
        call.parsed_input = parsed
        call.parse_note = note
        handler = self._handlers[call.tool_name]
        try:
            output, provenance = handler(parsed)
        except ToolInputError as exc:
            detail = exc.detail
            merged = "; ".join(x for x in (note, detail) if x) or None
            return done(INPUT_ERROR, str(exc), note=merged)
        except NotFound as exc:
            return done(NOT_FOUND, f"Error: {exc}", note=note)
        except NetworkError as exc:
            return done(NETWORK_ERROR, f"Error: {exc}", note=note)
        except EmptyContext as exc:
            return done(TOOL_ERROR, f"Error: {exc}", note=note)
        except Exception as exc:  # adapters must never crash the loop
            return done(TOOL_ERROR, f"Error: {exc}", note=note)
        return done(OK, output, provenance=provenance, note=note)
