"""Tool-usage statistics over agent traces: the task x tool ratio matrix."""

from __future__ import annotations

import csv
import io

from molagent.agent.model import AgentTrace


def tool_usage_stats(
    traces: list[AgentTrace],
    tools: list[str] | None = None,
    tasks: list[str] | None = None,
) -> dict[str, dict[str, float | None]]:
    """task -> tool -> fraction of that task's traces invoking the tool.

    A cell is None (rendered blank) when the task has no traces at all.
    """
    observed_tasks = sorted({t.task_label or "unlabeled" for t in traces})
    all_tasks = sorted(set(tasks or []) | set(observed_tasks))
    all_tools = tools
    if all_tools is None:
        all_tools = sorted({name for t in traces for name in t.tools_used})

    by_task: dict[str, list[AgentTrace]] = {}
    for t in traces:
        by_task.setdefault(t.task_label or "unlabeled", []).append(t)

    matrix: dict[str, dict[str, float | None]] = {}
    for task in all_tasks:
        bucket = by_task.get(task, [])
        row: dict[str, float | None] = {}
        for tool in all_tools:
            if not bucket:
                row[tool] = None
            else:
                used = sum(1 for t in bucket if tool in t.tools_used)
                row[tool] = used / len(bucket)
        matrix[task] = row
    return matrix


def usage_to_csv(matrix: dict[str, dict[str, float | None]]) -> str:
    """CSV with one row per task; blank cells for undefined buckets."""
    tools = sorted({tool for row in matrix.values() for tool in row})
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["task"] + tools)
    for task in sorted(matrix):
        row = matrix[task]
        writer.writerow(
            [task]
            + ["" if row.get(t) is None else f"{row[t]:.4f}" for t in tools]
        )
    return buffer.getvalue()
