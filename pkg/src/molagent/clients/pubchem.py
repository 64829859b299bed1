"""Compound-database client: lookup by name/SMILES with caching and replay.

Live mode talks to the public PubChem-style REST interface (name -> CID ->
record), normalizes the result into a :class:`CompoundRecord`, and caches
it.  Replay mode serves only from a :class:`FixtureStore`; record mode does
a live lookup and persists the normalized result so it replays byte-equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from urllib.parse import quote

from molagent.clients.cache import ResponseCache
from molagent.clients.fixtures import FixtureMissing, FixtureStore
from molagent.clients.transport import NetworkError, RateLimiter, Transport, http_request
from molagent.molgraph import SmilesParseError, canonical_smiles, parse_smiles


class NotFound(LookupError):
    pass


class EmptyContext(LookupError):
    """No record section overlaps the question."""


@dataclass(frozen=True)
class CompoundRecord:
    cid: int | None = None
    smiles: str | None = None
    iupac: str | None = None
    names: tuple[str, ...] = ()
    sections: dict | None = None

    def __post_init__(self):
        if self.cid is None and not self.smiles and not self.iupac and not self.names:
            raise ValueError("a compound record needs at least one identifier")

    @property
    def section_map(self) -> dict[str, str]:
        return self.sections or {}


def normalize_query(query: str) -> str:
    """Cache/fixture key: canonical SMILES when it parses, else folded name."""
    text = query.strip()
    try:
        return "smiles:" + canonical_smiles(parse_smiles(text))
    except SmilesParseError:
        return "name:" + " ".join(text.lower().split())


_STOPWORDS = frozenset(
    "a an and are as at be by for from has have in is it its of on or that the this to was with".split()
)


def _tokens(text: str) -> set[str]:
    return {
        w
        for w in "".join(c.lower() if c.isalnum() else " " for c in text).split()
        if len(w) > 2 and w not in _STOPWORDS
    }


class PubChemClient:
    MODES = ("live", "replay", "record")

    def __init__(
        self,
        mode: str = "replay",
        fixtures: FixtureStore | None = None,
        cache: ResponseCache | None = None,
        transport: Transport = http_request,
        limiter: RateLimiter | None = None,
        base_url: str = "https://pubchem.ncbi.nlm.nih.gov/rest/pug",
        view_url: str = "https://pubchem.ncbi.nlm.nih.gov/rest/pug_view",
    ):
        if mode not in self.MODES:
            raise ValueError(f"mode must be one of {self.MODES}")
        if mode in ("replay", "record") and fixtures is None:
            raise ValueError(f"{mode} mode needs a fixture store")
        self.mode = mode
        self.fixtures = fixtures
        self.cache = cache or ResponseCache()
        self.transport = transport
        self.limiter = limiter
        self.base_url = base_url
        self.view_url = view_url

    # -- lookup -----------------------------------------------------------

    def lookup(self, query: str) -> CompoundRecord:
        key = normalize_query(query)
        data = self.cache.get(key)
        if data is None:
            if self.mode == "replay":
                try:
                    data = self.fixtures.get(key)
                except FixtureMissing:
                    raise NotFound(f"no recorded compound for {query!r}") from None
            else:
                data = self._live_lookup(query)
                if self.mode == "record":
                    self.fixtures.put(key, data)
            self.cache.put(key, data)
        if not data.get("found"):
            raise NotFound(f"no compound matches {query!r}")
        return CompoundRecord(
            cid=data.get("cid"),
            smiles=data.get("smiles"),
            iupac=data.get("iupac"),
            names=tuple(data.get("names", ())),
            sections=data.get("sections", {}),
        )

    def _get_json(self, url: str, params: dict | None = None) -> tuple[int, dict | None]:
        if self.limiter is not None:
            self.limiter.acquire()
        try:
            status, text = self.transport("GET", url, params=params, timeout=30.0)
        finally:
            if self.limiter is not None:
                self.limiter.release()
        if status == 404:
            return status, None
        if status == 429:
            raise NetworkError("compound service rate limit (429)")
        if status >= 400:
            raise NetworkError(f"compound service returned {status} for {url}")
        return status, json.loads(text)

    def _live_lookup(self, query: str) -> dict:
        text = query.strip()
        is_smiles = normalize_query(text).startswith("smiles:")
        if is_smiles:
            url = f"{self.base_url}/compound/smiles/cids/JSON"
            status, payload = self._get_json(url, params={"smiles": text})
        else:
            url = f"{self.base_url}/compound/name/{quote(text)}/cids/JSON"
            status, payload = self._get_json(url)
        cids = (payload or {}).get("IdentifierList", {}).get("CID", [])
        if not cids:
            return {"found": False}
        cid = cids[0]

        _, props = self._get_json(
            f"{self.base_url}/compound/cid/{cid}/property/CanonicalSMILES,IUPACName/JSON"
        )
        info = (props or {}).get("PropertyTable", {}).get("Properties", [{}])[0]

        _, syn = self._get_json(f"{self.base_url}/compound/cid/{cid}/synonyms/JSON")
        names = (syn or {}).get("InformationList", {}).get("Information", [{}])[0].get(
            "Synonym", []
        )[:10]

        _, view = self._get_json(f"{self.view_url}/data/compound/{cid}/JSON")
        sections = _flatten_sections((view or {}).get("Record", {}).get("Section", []))

        return {
            "found": True,
            "cid": cid,
            "smiles": info.get("CanonicalSMILES"),
            "iupac": info.get("IUPACName"),
            "names": list(names),
            "sections": sections,
        }

    # -- question answering -----------------------------------------------

    def compound_qa(
        self,
        query: str,
        question: str,
        chat_backend,
        budget_chars: int = 4000,
    ) -> tuple[str, list[str]]:
        """Answer a question from record sections selected by keyword overlap.

        The context sent to the chat backend never exceeds `budget_chars`,
        which is the whole point of answering from selected sections instead
        of the full record.
        """
        record = self.lookup(query)
        q_tokens = _tokens(question)
        scored = []
        for heading, body in record.section_map.items():
            overlap = len(q_tokens & _tokens(heading + " " + body))
            if overlap > 0:
                scored.append((overlap, heading, body))
        if not scored:
            raise EmptyContext(f"no record section matches the question {question!r}")
        scored.sort(key=lambda t: (-t[0], t[1]))
        used: list[str] = []
        chunks: list[str] = []
        total = 0
        for _, heading, body in scored:
            chunk = f"[{heading}]\n{body}"
            if total + len(chunk) > budget_chars and chunks:
                break
            chunks.append(chunk[: budget_chars - total])
            total += len(chunks[-1])
            used.append(heading)
            if total >= budget_chars:
                break
        context = "\n\n".join(chunks)
        exchange = chat_backend.chat(
            [
                {
                    "role": "system",
                    "content": "Answer the question briefly using only the excerpts provided.",
                },
                {"role": "user", "content": f"{context}\n\nQuestion: {question}"},
            ]
        )
        return exchange.response, used


def _flatten_sections(sections: list, prefix: str = "", out: dict | None = None) -> dict:
    """pug_view section tree -> {heading path: concatenated strings}."""
    out = {} if out is None else out
    for node in sections:
        heading = node.get("TOCHeading", "")
        path = f"{prefix} / {heading}" if prefix else heading
        strings: list[str] = []
        for info in node.get("Information", []):
            value = info.get("Value", {})
            for swm in value.get("StringWithMarkup", []):
                if swm.get("String"):
                    strings.append(swm["String"])
            if "Number" in value:
                strings.append(" ".join(str(x) for x in value["Number"]))
        if strings:
            text = " ".join(strings)
            out[path] = text[:2000]
        _flatten_sections(node.get("Section", []), path, out)
    return out
