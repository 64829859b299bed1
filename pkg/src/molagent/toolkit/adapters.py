"""The 29 tool adapters and the registry builder.

Adapters are thin: deterministic tools call straight into the molecule
modules and render through the shared formatter; client-backed tools
delegate to the clients package in whatever mode the config selects
(live / record / replay / fixture / stub / off).
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from molagent.analysis import fingerprint, find_functional_groups, tanimoto
from molagent.clients.cache import ResponseCache
from molagent.clients.fixtures import FixtureMissing, FixtureStore
from molagent.clients.pubchem import NotFound, PubChemClient, normalize_query
from molagent.clients.reaction import BackendUnavailable, ReactionClient
from molagent.clients.websearch import WebSearchClient
from molagent.molgraph import (
    CONSTITUTION,
    STRICT,
    SmilesParseError,
    canonical_smiles,
    atom_counts,
    molecular_formula,
    molecular_weight,
    parse_smiles,
)
from molagent.selfies import SelfiesError, molecule_to_selfies, selfies_to_smiles
from molagent.toolkit.calculator import CalcError, evaluate_expression, render_result
from molagent.toolkit.predictors import (
    FixturePredictor,
    PROBABILITY_PREDICTORS,
    RemotePredictor,
    SIDE_EFFECT_CATEGORIES,
    StubPredictor,
    VALUE_PREDICTORS,
    predict_property,
)
from molagent.toolkit.registry import (
    DuplicateToolName,
    ToolDescriptor,
    ToolInputError,
    ToolParam,
    ToolRegistry,
)
from molagent.toolkit.render import (
    fmt_percent,
    fmt_sig,
    render_atom_counts,
    render_group_matches,
)

INVALID_SMILES = "Error: Invalid SMILES."

NEURAL_DISCLAIMER = (
    "Note that the result is predicted by a neural network model and may not "
    "be accurate. You may use other tools or resources to obtain more "
    "reliable results if needed."
)

# Tool name -> predictor id for the six property predictors.
PREDICTOR_TOOLS = {
    "BBBPPredictor": "BBBP",
    "HIVInhibitorPredictor": "HIVInhibitor",
    "ToxicityPredictor": "Toxicity",
    "SolubilityPredictor": "Solubility",
    "LogDPredictor": "LogD",
    "SideEffectPredictor": "SideEffect",
}


def _mol(value: str):
    try:
        return parse_smiles(value)
    except SmilesParseError as exc:
        raise ToolInputError(INVALID_SMILES, detail=str(exc)) from None


def default_fixture_dir() -> Path:
    return Path(str(resources.files("molagent.data").joinpath("fixtures")))


def load_catalog() -> list[ToolDescriptor]:
    raw = json.loads(
        resources.files("molagent.data").joinpath("tool_descriptors.json").read_text()
    )
    descriptors = []
    for entry in raw["tools"]:
        descriptors.append(
            ToolDescriptor(
                name=entry["name"],
                category=entry["category"],
                description=entry["description"],
                params=tuple(
                    ToolParam(p["name"], p.get("kind", "text"), tuple(p.get("aliases", ())))
                    for p in entry["params"]
                ),
                requires_network=entry["requires_network"],
                determinism=entry["determinism"],
            )
        )
    return descriptors


def _off_handler(name: str):
    def handler(parsed):
        raise BackendUnavailable(
            f"{name} is not configured in this environment")
    return handler


def build_registry(config: dict | None = None, chat_backend=None) -> ToolRegistry:
    """Build the full 29-tool registry.

    `config` selects backends; the default is fully offline: native tools,
    stub predictors, and replay clients over the packaged fixture store.
    Tools without a usable backend stay listed and return an error outcome,
    so the agent's tool menu is always complete.
    """
    config = dict(config or {})
    tool_cfg = config.get("tools", {})

    fixture_dir = Path(config.get("fixture_dir") or default_fixture_dir())
    fixtures = FixtureStore(fixture_dir)
    cache = ResponseCache(config.get("cache_dir"))

    pred_cfg = dict(config.get("predictors", {}))
    pred_backend_name = pred_cfg.get("backend", "stub")
    if pred_backend_name == "stub":
        predictor = StubPredictor(seed=int(pred_cfg.get("seed", config.get("seed", 0))))
        predictor_provenance = "native"
    elif pred_backend_name == "fixture":
        predictor = FixturePredictor(fixtures)
        predictor_provenance = "fixture"
    elif pred_backend_name == "remote":
        predictor = RemotePredictor(pred_cfg["endpoint"])
        predictor_provenance = "live"
    else:
        raise ValueError(f"unknown predictor backend {pred_backend_name!r}")

    pubchem_cfg = dict(config.get("pubchem", {}))
    pubchem_mode = pubchem_cfg.get("mode", "replay")
    pubchem = PubChemClient(mode=pubchem_mode, fixtures=fixtures, cache=cache)

    websearch_cfg = dict(config.get("websearch", {}))
    websearch_mode = websearch_cfg.get("mode", "replay")
    websearch = WebSearchClient(
        mode=websearch_mode,
        fixtures=fixtures,
        endpoint=websearch_cfg.get("endpoint", "https://api.tavily.com/search"),
    )

    reaction_cfg = dict(config.get("reaction", {}))
    reaction = ReactionClient(
        mode=reaction_cfg.get("mode", "replay"),
        fixtures=fixtures,
        endpoint=reaction_cfg.get("endpoint"),
    )

    client_provenance = {
        "live": "live", "record": "live", "replay": "fixture", "fixture": "fixture",
    }

    # -- native molecule/general handlers ----------------------------------

    def h_canonicalize(parsed):
        return canonical_smiles(_mol(parsed["smiles"]), STRICT), "native"

    def h_compare(parsed):
        mol_a = _mol(parsed["smiles1"])
        mol_b = _mol(parsed["smiles2"])
        same = canonical_smiles(mol_a, STRICT) == canonical_smiles(mol_b, STRICT)
        if same:
            return "Yes, the two SMILES describe the same molecule.", "native"
        if canonical_smiles(mol_a, CONSTITUTION) == canonical_smiles(mol_b, CONSTITUTION):
            return ("No, the two SMILES differ, but only in stereochemistry "
                    "(same constitution)."), "native"
        return "No, the two SMILES describe different molecules.", "native"

    def h_count_atoms(parsed):
        return render_atom_counts(atom_counts(_mol(parsed["smiles"]))), "native"

    def h_formula(parsed):
        return molecular_formula(_mol(parsed["smiles"])), "native"

    def h_weight(parsed):
        return f"{fmt_sig(molecular_weight(_mol(parsed['smiles'])))} g/mol", "native"

    def h_groups(parsed):
        return render_group_matches(find_functional_groups(_mol(parsed["smiles"]))), "native"

    def h_similarity(parsed):
        fp_a = fingerprint(_mol(parsed["smiles1"]))
        fp_b = fingerprint(_mol(parsed["smiles2"]))
        value = tanimoto(fp_a, fp_b)
        return (
            f"Tanimoto similarity: {fmt_sig(value)} "
            f"(radius {fp_a.radius}, {fp_a.nbits} bits)"
        ), "native"

    def h_selfies_to_smiles(parsed):
        try:
            return selfies_to_smiles(parsed["selfies"].strip()), "native"
        except SelfiesError as exc:
            raise ToolInputError(f"Error: Invalid SELFIES: {exc}.") from None

    def h_smiles_to_selfies(parsed):
        mol = _mol(parsed["smiles"])
        try:
            return molecule_to_selfies(mol).text, "native"
        except SelfiesError as exc:
            raise BackendUnavailable(f"cannot encode this molecule: {exc}") from None

    def h_python_repl(parsed):
        try:
            return render_result(evaluate_expression(parsed["code"])), "native"
        except CalcError as exc:
            raise ToolInputError(f"Error: {exc}") from None

    # -- predictor handlers -------------------------------------------------

    def make_predictor_handler(tool_name: str, predictor_id: str):
        def handler(parsed):
            mol = _mol(parsed["smiles"])
            value = predict_property(predictor, predictor_id, mol)
            if predictor_id in PROBABILITY_PREDICTORS:
                phrase = PROBABILITY_PREDICTORS[predictor_id]
                likely = "likely" if value >= 0.5 else "unlikely"
                text = (
                    f"The probability of the compound {phrase} is "
                    f"{fmt_percent(value)}, which means it's {likely} to happen. "
                    f"{NEURAL_DISCLAIMER}"
                )
            elif predictor_id in VALUE_PREDICTORS:
                label = VALUE_PREDICTORS[predictor_id][0]
                text = f"The predicted {label} is {fmt_sig(value)}. {NEURAL_DISCLAIMER}"
            else:
                lines = [
                    f"- {category}: {fmt_percent(p)}"
                    for category, p in zip(SIDE_EFFECT_CATEGORIES, value)
                ]
                text = (
                    "Predicted side-effect probabilities by category:\n"
                    + "\n".join(lines)
                    + f"\n{NEURAL_DISCLAIMER}"
                )
            return text, predictor_provenance
        return handler

    # -- client-backed handlers ---------------------------------------------

    def h_name_to_smiles(parsed):
        record = pubchem.lookup(parsed["name"].strip())
        if not record.smiles:
            raise NotFound(f"no SMILES on record for {parsed['name'].strip()!r}")
        return record.smiles, client_provenance[pubchem_mode]

    def h_smiles_to_iupac(parsed):
        mol = _mol(parsed["smiles"])  # validate before the lookup
        record = pubchem.lookup(parsed["smiles"].strip())
        del mol
        if not record.iupac:
            raise NotFound("no IUPAC name on record for this structure")
        return record.iupac, client_provenance[pubchem_mode]

    qa_backend = tool_cfg.get("PubchemSearchQA", {}).get("backend", "replay")

    def h_pubchem_qa(parsed):
        query = parsed["query"].strip()
        question = parsed["question"].strip()
        if qa_backend == "replay":
            key = f"pubchemqa:{normalize_query(query)}|{_qa_norm(question)}"
            try:
                return str(fixtures.get(key)), "fixture"
            except FixtureMissing:
                raise BackendUnavailable(
                    "no recorded answer for this compound/question") from None
        if chat_backend is None:
            raise BackendUnavailable("PubchemSearchQA needs a chat backend in live mode")
        answer, _sections = pubchem.compound_qa(query, question, chat_backend)
        return answer, client_provenance[pubchem_mode]

    def h_websearch(parsed):
        result = websearch.search(parsed["query"].strip())
        summary = result.get("summary", "")
        sources = result.get("sources", [])
        if sources:
            return summary + "\nSources: " + ", ".join(sources), client_provenance[websearch_mode]
        return summary, client_provenance[websearch_mode]

    def make_fixture_handler(tool_name: str, prefix: str, param: str,
                             canonical_key: bool = False, validate_smiles_out: bool = False):
        backend = tool_cfg.get(tool_name, {}).get("backend", "fixture")

        def handler(parsed):
            if backend == "off":
                raise BackendUnavailable(f"{tool_name} is not configured in this environment")
            value = parsed[param].strip()
            if canonical_key:
                key_val = canonical_smiles(_mol(value))
            else:
                key_val = _qa_norm(value)
            try:
                result = fixtures.get(f"{prefix}:{key_val}")
            except FixtureMissing:
                raise BackendUnavailable(
                    f"{tool_name} has no recorded result for this input "
                    "(offline fixture backend)") from None
            if validate_smiles_out:
                _mol(str(result))
            return str(result), "fixture"
        return handler

    def h_ai_expert(parsed):
        backend = tool_cfg.get("AiExpert", {}).get("backend", "fixture")
        question = parsed["question"].strip()
        if backend == "chat":
            if chat_backend is None:
                raise BackendUnavailable("AiExpert needs a chat backend")
            exchange = chat_backend.chat(
                [{"role": "user", "content": question}]
            )
            return exchange.response, "live"
        if backend == "off":
            raise BackendUnavailable("AiExpert is not configured in this environment")
        try:
            return fixtures.get(f"aiexpert:{_qa_norm(question)}"), "fixture"
        except FixtureMissing:
            raise BackendUnavailable(
                "AiExpert has no recorded answer for this question "
                "(offline fixture backend)") from None

    def h_forward(parsed):
        product = reaction.forward(_canonical_input(parsed["reactants"]))
        return product, client_provenance[reaction.mode]

    def h_retro(parsed):
        candidates = reaction.retro(_canonical_input(parsed["product"]))
        lines = [f"{i + 1}. {c}" for i, c in enumerate(candidates)]
        return "Candidate reactant sets:\n" + "\n".join(lines), client_provenance[reaction.mode]

    def _canonical_input(value: str) -> str:
        _mol(value.strip())  # surface invalid input as an input_error
        return value.strip()

    handlers = {
        "AiExpert": h_ai_expert,
        "PythonREPL": h_python_repl,
        "WebSearch": h_websearch,
        "WikipediaSearch": make_fixture_handler("WikipediaSearch", "wikipedia", "query"),
        "BBBPPredictor": make_predictor_handler("BBBPPredictor", "BBBP"),
        "CanonicalizeSMILES": h_canonicalize,
        "CompareSMILES": h_compare,
        "CountMolAtoms": h_count_atoms,
        "FunctionalGroups": h_groups,
        "GetMoleculePrice": make_fixture_handler(
            "GetMoleculePrice", "price", "smiles", canonical_key=True),
        "HIVInhibitorPredictor": make_predictor_handler("HIVInhibitorPredictor", "HIVInhibitor"),
        "IUPAC2SMILES": h_name_to_smiles,
        "LogDPredictor": make_predictor_handler("LogDPredictor", "LogD"),
        "MolSimilarity": h_similarity,
        "MoleculeCaptioner": make_fixture_handler(
            "MoleculeCaptioner", "caption", "smiles", canonical_key=True),
        "MoleculeGenerator": make_fixture_handler(
            "MoleculeGenerator", "generate", "description", validate_smiles_out=True),
        "Name2SMILES": h_name_to_smiles,
        "PatentCheck": make_fixture_handler(
            "PatentCheck", "patent", "smiles", canonical_key=True),
        "PubchemSearchQA": h_pubchem_qa,
        "SELFIES2SMILES": h_selfies_to_smiles,
        "SMILES2Formula": h_formula,
        "SMILES2IUPAC": h_smiles_to_iupac,
        "SMILES2SELFIES": h_smiles_to_selfies,
        "SMILES2Weight": h_weight,
        "SideEffectPredictor": make_predictor_handler("SideEffectPredictor", "SideEffect"),
        "SolubilityPredictor": make_predictor_handler("SolubilityPredictor", "Solubility"),
        "ToxicityPredictor": make_predictor_handler("ToxicityPredictor", "Toxicity"),
        "ForwardSynthesis": h_forward,
        "Retrosynthesis": h_retro,
    }

    registry = ToolRegistry()
    for descriptor in load_catalog():
        handler = handlers.get(descriptor.name)
        if handler is None:
            handler = _off_handler(descriptor.name)
        if tool_cfg.get(descriptor.name, {}).get("backend") == "off":
            handler = _off_handler(descriptor.name)
        registry.register(descriptor, handler)
    return registry


def _qa_norm(text: str) -> str:
    return " ".join(text.lower().split())
