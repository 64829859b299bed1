"""Dataset loading, metrics, error-taxonomy analytics, and the benchmark runner."""

from molagent.evaluation.datasets import (
    ALL_TASKS,
    BINARY_TASKS,
    DuplicateId,
    EvalSample,
    MCQ_TASK,
    NUMERIC_TASKS,
    SMILES_OUTPUT_TASKS,
    SPECIALIZED_TASKS,
    SchemaError,
    TASK_METRICS,
    load_dataset,
    subsample,
)
from molagent.evaluation.metrics import (
    CAPTION_NOTE,
    MetricReport,
    MissingAnswer,
    accuracy,
    average_reports,
    caption_overlap,
    is_valid_smiles,
    parse_binary,
    parse_numeric,
    rmse,
    score_batch,
    score_em,
    score_fts,
)
from molagent.evaluation.runner import (
    BenchmarkConfig,
    BenchmarkResult,
    answer_mode_for,
    run_benchmark,
)
from molagent.evaluation.taxonomy import (
    CLASSES,
    ErrorAnnotation,
    ErrorDistribution,
    GROUNDING,
    REASONING,
    SUBTYPES,
    SUBTYPE_CLASS,
    TOOL,
    aggregate_errors,
    load_annotations,
    render_distribution,
    save_annotations,
)
from molagent.evaluation.usage import tool_usage_stats, usage_to_csv

__all__ = [
    "ALL_TASKS",
    "BINARY_TASKS",
    "BenchmarkConfig",
    "BenchmarkResult",
    "CAPTION_NOTE",
    "CLASSES",
    "DuplicateId",
    "ErrorAnnotation",
    "ErrorDistribution",
    "EvalSample",
    "GROUNDING",
    "MCQ_TASK",
    "MetricReport",
    "MissingAnswer",
    "NUMERIC_TASKS",
    "REASONING",
    "SMILES_OUTPUT_TASKS",
    "SPECIALIZED_TASKS",
    "SUBTYPES",
    "SUBTYPE_CLASS",
    "SchemaError",
    "TASK_METRICS",
    "TOOL",
    "accuracy",
    "aggregate_errors",
    "answer_mode_for",
    "average_reports",
    "caption_overlap",
    "is_valid_smiles",
    "load_annotations",
    "load_dataset",
    "parse_binary",
    "parse_numeric",
    "render_distribution",
    "rmse",
    "run_benchmark",
    "score_batch",
    "score_em",
    "score_fts",
    "subsample",
    "tool_usage_stats",
    "usage_to_csv",
]
