"""Command-line surface: ask, eval, annotate, report, tools.

stdout carries data, stderr carries diagnostics.  Exit codes: 0 success
(for `ask`: answered), 1 startup/validation error, 2 agent hit the step
cap, 3 chat backend failure.  ``--offline`` flips the transport guard, so
any live network attempt becomes a hard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from molagent.agent import (
    ANSWERED,
    AgentRunConfig,
    AgentTrace,
    BACKEND_ERROR,
    MAX_STEPS,
    PromptTemplate,
    run_agent,
)
from molagent.clients import (
    HttpChatBackend,
    RuleChatBackend,
    ScriptedChatBackend,
    set_offline,
)
from molagent.evaluation import (
    BenchmarkConfig,
    ErrorAnnotation,
    SchemaError,
    SUBTYPE_CLASS,
    aggregate_errors,
    load_annotations,
    load_dataset,
    render_distribution,
    run_benchmark,
    save_annotations,
    subsample,
    tool_usage_stats,
    usage_to_csv,
)
from molagent.toolkit import build_registry

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MAX_STEPS = 2
EXIT_BACKEND = 3


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"config file not found: {p}")
    return json.loads(p.read_text(encoding="utf-8"))


def _build_chat(config: dict, script_path: str | None = None):
    """Chat backend factory from config; returns (factory, single_session)."""
    chat_cfg = dict(config.get("chat", {}))
    if script_path:
        chat_cfg = {"mode": "scripted", "script": script_path}
    mode = chat_cfg.get("mode", "rule")
    if mode == "scripted":
        responses = json.loads(Path(chat_cfg["script"]).read_text(encoding="utf-8"))
        if not isinstance(responses, list):
            raise ValueError("a scripted chat file holds a JSON list of completions")

        def factory(sample=None, repeat=0):
            return ScriptedChatBackend(list(responses))

        return factory, True
    if mode == "scripted_map":
        table = json.loads(Path(chat_cfg["script"]).read_text(encoding="utf-8"))

        def factory(sample=None, repeat=0):
            key = getattr(sample, "id", None)
            responses = table.get(key, table.get("default", []))
            return ScriptedChatBackend(list(responses))

        return factory, True
    if mode == "rule":
        backend = RuleChatBackend(chat_cfg.get("text", "Final Answer: unknown"))
        return (lambda sample=None, repeat=0: backend), False
    if mode == "http":
        backend = HttpChatBackend(
            endpoint=chat_cfg["endpoint"],
            model=chat_cfg.get("model", "default"),
            api_key_env=chat_cfg.get("api_key_env", "MOLAGENT_API_KEY"),
            auth_header=chat_cfg.get("auth_header", "Authorization"),
            auth_scheme=chat_cfg.get("auth_scheme", "Bearer"),
        )
        return (lambda sample=None, repeat=0: backend), False
    raise ValueError(f"unknown chat mode {mode!r}")


def _print_trace(trace: AgentTrace, out=sys.stdout) -> None:
    for step in trace.steps:
        print(f"Step {step.index}", file=out)
        print(f"Thought: {step.thought}", file=out)
        if step.action is not None:
            print(f"Tool: {step.action.tool_name}", file=out)
            print(f"Tool input: {step.action.raw_input}", file=out)
            print(f"Observation: {step.observation.output}", file=out)
        print("", file=out)
    if trace.status == ANSWERED:
        print(f"Answer: {trace.final_answer}", file=out)
    else:
        print(f"[{trace.status}]" + (f" {trace.error}" if trace.error else ""), file=out)


def cmd_ask(args, config: dict) -> int:
    registry = build_registry(config)
    factory, _ = _build_chat(config, args.script)
    trace = run_agent(
        args.question,
        registry,
        factory(),
        AgentRunConfig(
            max_steps=args.max_steps,
            shots=args.shots,
            seed=args.seed,
            answer_mode=args.answer_mode,
            family=args.family,
        ),
    )
    _print_trace(trace)
    if args.save_trace:
        trace.save(args.save_trace)
    if trace.status == ANSWERED:
        return EXIT_OK
    if trace.status == MAX_STEPS:
        return EXIT_MAX_STEPS
    return EXIT_BACKEND


def cmd_eval(args, config: dict) -> int:
    try:
        samples = load_dataset(args.dataset, args.format)
    except SchemaError as exc:
        print(f"dataset error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.sample_k:
        samples = subsample(samples, args.sample_k, args.seed)
    registry = build_registry(config) if args.mode == "agent" else None
    factory, _ = _build_chat(config, args.script)
    result = run_benchmark(
        samples,
        registry,
        factory,
        BenchmarkConfig(
            mode=args.mode,
            repeats=args.repeats,
            shots=args.shots,
            seed=args.seed,
            max_steps=args.max_steps,
            jobs=args.jobs,
        ),
    )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "report.json").write_text(
        json.dumps(result.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    table_parts = []
    for i, report in enumerate(result.per_repeat):
        table_parts.append(f"== repeat {i} ==\n{report.to_table()}")
    table_parts.append(f"== average over {len(result.per_repeat)} repeat(s) ==\n"
                       f"{result.average.to_table()}")
    (outdir / "report.txt").write_text("\n\n".join(table_parts) + "\n", encoding="utf-8")
    if result.traces:
        traces_dir = outdir / "traces"
        traces_dir.mkdir(exist_ok=True)
        for i, trace in enumerate(result.traces):
            trace.save(traces_dir / f"{trace.task_id or 'trace'}_{i:04d}.json")
        matrix = tool_usage_stats(result.traces)
        (outdir / "usage.csv").write_text(usage_to_csv(matrix), encoding="utf-8")
    print(result.average.to_table())
    print(f"report written to {outdir}", file=sys.stderr)
    return EXIT_OK


def _load_traces(directory: Path) -> list[AgentTrace]:
    traces = []
    for path in sorted(directory.glob("*.json")):
        try:
            traces.append(AgentTrace.load(path))
        except (ValueError, KeyError):
            continue  # not a trace file
    return traces


def cmd_annotate(args, config: dict) -> int:
    traces_dir = Path(args.traces)
    if not traces_dir.is_dir():
        print(f"no such traces directory: {traces_dir}", file=sys.stderr)
        return EXIT_ERROR
    traces = _load_traces(traces_dir)
    if not traces:
        print("no traces to annotate", file=sys.stderr)
        return EXIT_OK
    sidecar = traces_dir / "annotations.jsonl"
    print(f"annotating {len(traces)} trace(s); classes/subtypes:", file=sys.stderr)
    for subtype, cls in SUBTYPE_CLASS.items():
        print(f"  {cls}: {subtype}", file=sys.stderr)
    written = 0
    for trace in traces:
        print(f"--- trace {trace.task_id or '?'} [{trace.status}] ---")
        _print_trace(trace)
        cls = input("class (reasoning/grounding/tool, empty to skip): ").strip()
        if not cls:
            continue
        subtype = input("subtype: ").strip()
        step_raw = input("step index (empty for none): ").strip()
        note = input("note: ").strip()
        try:
            annotation = ErrorAnnotation(
                trace_id=trace.task_id or "unknown",
                error_class=cls,
                subtype=subtype,
                step_index=int(step_raw) if step_raw else None,
                note=note,
                annotator=args.annotator,
            )
        except ValueError as exc:
            print(f"rejected: {exc}", file=sys.stderr)
            continue
        save_annotations(sidecar, [annotation])
        written += 1
    print(f"{written} annotation(s) appended to {sidecar}", file=sys.stderr)
    return EXIT_OK


def cmd_report(args, config: dict) -> int:
    traces_dir = Path(args.traces)
    if not traces_dir.is_dir():
        print(f"no such traces directory: {traces_dir}", file=sys.stderr)
        return EXIT_ERROR
    annotations = load_annotations(traces_dir / "annotations.jsonl")
    if not annotations:
        print("no annotations")
    else:
        print(render_distribution(aggregate_errors(annotations)))
    traces = _load_traces(traces_dir)
    if traces:
        csv_text = usage_to_csv(tool_usage_stats(traces))
        out = Path(args.out) if args.out else traces_dir
        out.mkdir(parents=True, exist_ok=True)
        (out / "usage.csv").write_text(csv_text, encoding="utf-8")
        print(f"usage matrix written to {out / 'usage.csv'}", file=sys.stderr)
    return EXIT_OK


def cmd_tools(args, config: dict) -> int:
    registry = build_registry(config)
    if args.json:
        print(registry.catalog_json())
        return EXIT_OK
    counts = registry.category_counts()
    print(f"{len(registry.names)} tools "
          f"(general: {counts['general']}, molecule: {counts['molecule']}, "
          f"reaction: {counts['reaction']})")
    for d in registry.descriptors:
        print(f"- {d.name} ({d.category}): {d.description}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="molagent",
        description="Chemistry agent: ask questions, run benchmarks, analyze errors.",
    )
    parser.add_argument("--config", help="JSON config file (backends, fixture dirs)")
    parser.add_argument("--offline", action="store_true",
                        help="forbid all live network access")
    parser.add_argument("--seed", type=int, default=0, help="run seed (default 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    ask = sub.add_parser("ask", help="answer one question with the tool-using agent")
    ask.add_argument("question")
    ask.add_argument("--script", help="scripted chat backend: JSON list of completions")
    ask.add_argument("--shots", type=int, choices=(0, 5), default=0)
    ask.add_argument("--max-steps", type=int, default=15)
    ask.add_argument("--answer-mode", choices=("tagged", "mcq_letter", "free"),
                     default="free")
    ask.add_argument("--family", choices=("specialized", "exam"), default="exam")
    ask.add_argument("--save-trace", help="write the trace JSON here")

    ev = sub.add_parser("eval", help="run a benchmark dataset")
    ev.add_argument("--dataset", required=True)
    ev.add_argument("--format", choices=("jsonl_specialized", "jsonl_mcq"),
                    default="jsonl_specialized")
    ev.add_argument("--mode", choices=("agent", "bare"), default="agent")
    ev.add_argument("--script", help="scripted chat backend JSON (list or id map)")
    ev.add_argument("--repeats", type=int, default=1)
    ev.add_argument("--jobs", type=int, default=1)
    ev.add_argument("--shots", type=int, choices=(0, 5), default=0)
    ev.add_argument("--max-steps", type=int, default=15)
    ev.add_argument("--sample-k", type=int, default=0,
                    help="seeded per-task subsample size (0 = all)")
    ev.add_argument("--out", default="eval_out")

    an = sub.add_parser("annotate", help="step through traces recording error labels")
    an.add_argument("--traces", required=True)
    an.add_argument("--annotator", default="anonymous")

    rp = sub.add_parser("report", help="aggregate annotations and tool usage")
    rp.add_argument("--traces", required=True)
    rp.add_argument("--out", default=None)

    tl = sub.add_parser("tools", help="print the 29-tool catalog")
    tl.add_argument("--json", action="store_true")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.offline:
        set_offline(True)
    try:
        config = _load_config(args.config)
    except (FileNotFoundError, json.JSONDecodeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    commands = {
        "ask": cmd_ask,
        "eval": cmd_eval,
        "annotate": cmd_annotate,
        "report": cmd_report,
        "tools": cmd_tools,
    }
    try:
        return commands[args.command](args, config)
    except (FileNotFoundError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
