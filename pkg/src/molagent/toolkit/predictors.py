"""Molecular property predictor interface: stub, fixture, and remote backends.

The real models live behind remote services; this package reaches them only
through this interface.  The stub backend hashes the canonical SMILES with a
seed, so the same molecule always gets the same (fake) score, which is what
offline tests need.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from molagent.clients.fixtures import FixtureMissing, FixtureStore
from molagent.clients.reaction import BackendUnavailable
from molagent.clients.transport import RateLimiter, Transport, http_request
from molagent.molgraph import Molecule, canonical_smiles

PROBABILITY_PREDICTORS: dict[str, str] = {
    "BBBP": "to penetrate the blood-brain barrier",
    "HIVInhibitor": "to inhibit HIV replication",
    "Toxicity": "to be toxic",
}

VALUE_PREDICTORS: dict[str, tuple[str, tuple[float, float]]] = {
    "Solubility": ("log solubility in mol/L", (-8.0, 2.0)),
    "LogD": ("logD at pH 7.4", (-3.0, 6.0)),
}

SIDE_EFFECT_CATEGORIES: tuple[str, ...] = (
    "hepatobiliary disorders",
    "metabolism and nutrition disorders",
    "eye disorders",
    "musculoskeletal and connective tissue disorders",
    "gastrointestinal disorders",
    "immune system disorders",
    "reproductive system and breast disorders",
    "nervous system disorders",
    "psychiatric disorders",
    "renal and urinary disorders",
    "skin and subcutaneous tissue disorders",
    "cardiac disorders",
    "vascular disorders",
    "blood and lymphatic system disorders",
    "respiratory, thoracic and mediastinal disorders",
    "endocrine disorders",
    "ear and labyrinth disorders",
    "infections and infestations",
    "general disorders and administration site conditions",
    "injury, poisoning and procedural complications",
)

PREDICTOR_IDS = tuple(PROBABILITY_PREDICTORS) + tuple(VALUE_PREDICTORS) + ("SideEffect",)


def _fraction(*parts: str) -> float:
    digest = hashlib.sha256("|".join(parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / float(1 << 64)


@dataclass(frozen=True)
class StubPredictor:
    """Deterministic fake scores keyed on (seed, predictor, canonical SMILES)."""

    seed: int = 0

    def predict(self, predictor_id: str, mol: Molecule):
        key = canonical_smiles(mol)
        if predictor_id in PROBABILITY_PREDICTORS:
            return _fraction(str(self.seed), predictor_id, key)
        if predictor_id in VALUE_PREDICTORS:
            lo, hi = VALUE_PREDICTORS[predictor_id][1]
            return lo + _fraction(str(self.seed), predictor_id, key) * (hi - lo)
        if predictor_id == "SideEffect":
            return [
                _fraction(str(self.seed), predictor_id, category, key)
                for category in SIDE_EFFECT_CATEGORIES
            ]
        raise BackendUnavailable(f"unknown predictor {predictor_id!r}")


@dataclass(frozen=True)
class FixturePredictor:
    """Replays recorded predictions; missing molecules are unavailable."""

    fixtures: FixtureStore

    def predict(self, predictor_id: str, mol: Molecule):
        key = f"predict:{predictor_id}:{canonical_smiles(mol)}"
        try:
            return self.fixtures.get(key)
        except FixtureMissing:
            raise BackendUnavailable(
                f"no recorded {predictor_id} prediction for this molecule") from None


@dataclass(frozen=True)
class RemotePredictor:
    endpoint: str
    transport: Transport = http_request
    limiter: RateLimiter | None = None

    def predict(self, predictor_id: str, mol: Molecule):
        if self.limiter is not None:
            self.limiter.acquire()
        try:
            status, text = self.transport(
                "POST",
                f"{self.endpoint}/predict",
                json_body={"predictor": predictor_id, "smiles": canonical_smiles(mol)},
                timeout=60.0,
            )
        finally:
            if self.limiter is not None:
                self.limiter.release()
        if status >= 400:
            raise BackendUnavailable(f"predictor service returned {status}")
        return json.loads(text).get("value")


def predict_property(backend, predictor_id: str, mol: Molecule):
    """Run a predictor and validate its output shape and ranges."""
    if predictor_id not in PREDICTOR_IDS:
        raise BackendUnavailable(f"unknown predictor {predictor_id!r}")
    value = backend.predict(predictor_id, mol)
    if predictor_id in PROBABILITY_PREDICTORS:
        if not isinstance(value, (int, float)) or not 0.0 <= float(value) <= 1.0:
            raise BackendUnavailable(
                f"{predictor_id} returned {value!r}, not a probability in [0, 1]")
        return float(value)
    if predictor_id in VALUE_PREDICTORS:
        if not isinstance(value, (int, float)):
            raise BackendUnavailable(f"{predictor_id} returned non-numeric {value!r}")
        return float(value)
    if (
        not isinstance(value, list)
        or len(value) != len(SIDE_EFFECT_CATEGORIES)
        or not all(isinstance(v, (int, float)) and 0.0 <= v <= 1.0 for v in value)
    ):
        raise BackendUnavailable(
            "SideEffect must return one probability per category in [0, 1]")
    return [float(v) for v in value]
