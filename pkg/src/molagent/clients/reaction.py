"""Reaction prediction client (forward synthesis and single-step retro).

Remote output is validated by parsing before it reaches the agent: an
unparsable prediction surfaces as InvalidRemoteOutput rather than being
passed along as a success.
"""

from __future__ import annotations

import json

from molagent.clients.fixtures import FixtureMissing, FixtureStore
from molagent.clients.transport import NetworkError, RateLimiter, Transport, http_request
from molagent.molgraph import canonical_smiles, parse_smiles


class BackendUnavailable(RuntimeError):
    pass


class InvalidRemoteOutput(RuntimeError):
    pass


class ReactionClient:
    MODES = ("live", "replay", "record")

    def __init__(
        self,
        mode: str = "replay",
        fixtures: FixtureStore | None = None,
        endpoint: str | None = None,
        transport: Transport = http_request,
        limiter: RateLimiter | None = None,
    ):
        if mode not in self.MODES:
            raise ValueError(f"mode must be one of {self.MODES}")
        if mode in ("replay", "record") and fixtures is None:
            raise ValueError(f"{mode} mode needs a fixture store")
        if mode in ("live", "record") and not endpoint:
            raise BackendUnavailable("live reaction prediction needs an endpoint")
        self.mode = mode
        self.fixtures = fixtures
        self.endpoint = endpoint
        self.transport = transport
        self.limiter = limiter

    @staticmethod
    def _key(direction: str, molecules: str) -> str:
        return f"reaction:{direction}:{canonical_smiles(parse_smiles(molecules))}"

    def forward(self, reactants: str) -> str:
        """Product SMILES for dot-joined reactants (and reagents)."""
        return self._predict("forward", reactants)

    def retro(self, product: str) -> list[str]:
        """Candidate reactant sets (dot-joined SMILES) for a product."""
        result = self._predict("retro", product)
        return list(result) if isinstance(result, list) else [result]

    def _predict(self, direction: str, molecules: str):
        key = self._key(direction, molecules)  # raises on unparsable input
        if self.mode == "replay":
            try:
                result = self.fixtures.get(key)
            except FixtureMissing:
                raise BackendUnavailable(
                    f"no recorded {direction} prediction for {molecules!r}") from None
        else:
            result = self._live(direction, molecules)
            if self.mode == "record":
                self.fixtures.put(key, result)
        self._validate(result)
        return result

    def _live(self, direction: str, molecules: str):
        if self.limiter is not None:
            self.limiter.acquire()
        try:
            status, text = self.transport(
                "POST",
                f"{self.endpoint}/{direction}",
                json_body={"molecules": molecules},
                timeout=60.0,
            )
        finally:
            if self.limiter is not None:
                self.limiter.release()
        if status >= 400:
            raise NetworkError(f"reaction service returned {status}")
        payload = json.loads(text)
        return payload.get("prediction")

    @staticmethod
    def _validate(result) -> None:
        candidates = result if isinstance(result, list) else [result]
        if not candidates:
            raise InvalidRemoteOutput("reaction backend returned no candidates")
        for smiles in candidates:
            if not isinstance(smiles, str):
                raise InvalidRemoteOutput(f"non-text prediction: {smiles!r}")
            try:
                parse_smiles(smiles)
            except Exception as exc:
                raise InvalidRemoteOutput(
                    f"unparsable prediction {smiles!r}: {exc}") from exc
