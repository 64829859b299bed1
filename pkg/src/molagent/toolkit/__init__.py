"""Tool contract, registry, and the 29 tool adapters."""

from molagent.toolkit.adapters import (
    INVALID_SMILES,
    NEURAL_DISCLAIMER,
    PREDICTOR_TOOLS,
    build_registry,
    default_fixture_dir,
    load_catalog,
)
from molagent.toolkit.calculator import (
    CalcError,
    CalcSyntaxError,
    DivisionByZero,
    UndefinedVariable,
    evaluate_expression,
    render_result,
)
from molagent.toolkit.predictors import (
    FixturePredictor,
    PROBABILITY_PREDICTORS,
    SIDE_EFFECT_CATEGORIES,
    StubPredictor,
    VALUE_PREDICTORS,
    predict_property,
)
from molagent.toolkit.registry import (
    CATEGORIES,
    DuplicateToolName,
    INPUT_ERROR,
    NETWORK_ERROR,
    NOT_FOUND,
    OK,
    TOOL_ERROR,
    ToolCall,
    ToolDescriptor,
    ToolInputError,
    ToolOutcome,
    ToolParam,
    ToolRegistry,
    parse_tool_input,
)

__all__ = [
    "CATEGORIES",
    "CalcError",
    "CalcSyntaxError",
    "DivisionByZero",
    "DuplicateToolName",
    "FixturePredictor",
    "INPUT_ERROR",
    "INVALID_SMILES",
    "NETWORK_ERROR",
    "NEURAL_DISCLAIMER",
    "NOT_FOUND",
    "OK",
    "PREDICTOR_TOOLS",
    "PROBABILITY_PREDICTORS",
    "SIDE_EFFECT_CATEGORIES",
    "StubPredictor",
    "TOOL_ERROR",
    "ToolCall",
    "ToolDescriptor",
    "ToolInputError",
    "ToolOutcome",
    "ToolParam",
    "ToolRegistry",
    "UndefinedVariable",
    "VALUE_PREDICTORS",
    "build_registry",
    "default_fixture_dir",
    "evaluate_expression",
    "load_catalog",
    "parse_tool_input",
    "predict_property",
    "render_result",
]
