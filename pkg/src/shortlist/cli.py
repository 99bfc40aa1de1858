"""Command line entry points.

Subcommands:
  serve        run the HTTP service over one or more catalog files
  gen-catalog  emit a deterministic seeded catalog as JSON
  oracle       print the correct answer set for a task over a catalog
  score        score a JSON-lines trial log into a per-trial CSV
  analyze      build the full usability report (JSON + summary-table CSV)
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .catalog import Catalog, catalog_to_json, load_catalog
from .data import bundled_catalogs
from .errors import ShortlistError
from .experiment import canonical_tasks, load_surveys, load_tasks, load_trials, score_trial
from .generator import generate_catalog
from .report import build_report, report_to_json, table_rows


def _load_catalogs(paths: list[str]) -> dict[str, Catalog]:
    if not paths:
        return bundled_catalogs()
    catalogs = {}
    for path in paths:
        catalog = load_catalog(path)
        catalogs[catalog.variant_tag] = catalog
    return catalogs


def _load_task_map(path: str | None):
    if path:
        return load_tasks(path)
    return {t.id: t for t in canonical_tasks()}


def _variant_map(catalogs: dict[str, Catalog], typical: str | None, visualization: str | None) -> dict[str, str]:
    variants = list(catalogs)
    return {
        "typical": typical or variants[0],
        "visualization": visualization or variants[-1],
    }


def cmd_gen_catalog(args) -> int:
    catalog = generate_catalog(args.seed, args.count, args.variant)
    text = json.dumps(catalog_to_json(catalog), indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_oracle(args) -> int:
    catalogs = _load_catalogs(args.catalog)
    tasks = _load_task_map(args.tasks)
    if args.task not in tasks:
        print(f"error: unknown task {args.task!r}", file=sys.stderr)
        return 2
    from .experiment import correct_answer_set

    out = {}
    for variant, catalog in catalogs.items():
        correct = correct_answer_set(catalog, tasks[args.task])
        out[variant] = [pid for pid in catalog.product_ids if pid in correct]
    payload = {"task": args.task, "correct": out}
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_score(args) -> int:
    catalogs = _load_catalogs(args.catalog)
    tasks = _load_task_map(args.tasks)
    variant_map = _variant_map(catalogs, args.typical, args.visualization)
    trials = load_trials(args.logs)
    writer = csv.writer(open(args.out, "w", newline="") if args.out else sys.stdout)
    writer.writerow(["participant_id", "task_id", "interface_variant", "correct", "duration_s"])
    for trial in trials:
        task = tasks.get(trial.task_id)
        if task is None:
            continue
        catalog = catalogs[variant_map[trial.interface_variant]]
        score = score_trial(catalog, task, trial)
        writer.writerow(
            [trial.participant_id, trial.task_id, trial.interface_variant, int(score.correct), score.duration_s]
        )
    return 0


def cmd_analyze(args) -> int:
    catalogs = _load_catalogs(args.catalog)
    tasks = _load_task_map(args.tasks)
    variant_map = _variant_map(catalogs, args.typical, args.visualization)
    trials = load_trials(args.logs)
    surveys = load_surveys(args.surveys) if args.surveys else []
    report = build_report(catalogs, tasks, trials, surveys=surveys, variant_map=variant_map)
    Path(args.out).write_text(json.dumps(report_to_json(report), indent=2) + "\n", encoding="utf-8")
    if args.csv:
        with open(args.csv, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(
                [
                    "task",
                    "mean_time_typical_s",
                    "mean_time_visualization_s",
                    "correct_typical",
                    "correct_visualization",
                ]
            )
            for row in table_rows(report):
                writer.writerow(
                    [
                        row["task"],
                        row["mean_time_typical_s"],
                        row["mean_time_visualization_s"],
                        row["correct_typical"],
                        row["correct_visualization"],
                    ]
                )
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .api import AppState, create_app

    catalogs = _load_catalogs(args.catalog)
    tasks = _load_task_map(args.tasks)
    variant_map = _variant_map(catalogs, args.typical, args.visualization)
    state = AppState(
        catalogs,
        bucket_cap=args.bucket_cap,
        tasks=tasks,
        variant_map=variant_map,
        assets_dir=args.assets,
    )
    app = create_app(state)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shortlist", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-catalog", help="emit a deterministic seeded catalog")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--variant", required=True, help="variant tag, e.g. baseline-A")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_gen_catalog)

    p = sub.add_parser("oracle", help="print the correct answer set for a task")
    p.add_argument("--task", required=True)
    p.add_argument("--catalog", action="append", default=[], help="catalog file (repeatable; default bundled)")
    p.add_argument("--tasks", help="tasks JSON file (default bundled)")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("score", help="score a trial log into per-trial CSV")
    p.add_argument("--logs", required=True, help="JSON-lines trial log")
    p.add_argument("--catalog", action="append", default=[])
    p.add_argument("--tasks")
    p.add_argument("--typical", help="catalog variant served by the typical interface")
    p.add_argument("--visualization", help="catalog variant served by the visualization interface")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("analyze", help="build the usability report")
    p.add_argument("--logs", required=True)
    p.add_argument("--surveys")
    p.add_argument("--out", required=True, help="report JSON output path")
    p.add_argument("--csv", help="also write the summary-table CSV here")
    p.add_argument("--catalog", action="append", default=[])
    p.add_argument("--tasks")
    p.add_argument("--typical")
    p.add_argument("--visualization")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--catalog", action="append", default=[], help="catalog file (repeatable; default bundled)")
    p.add_argument("--tasks")
    p.add_argument("--typical")
    p.add_argument("--visualization")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--bucket-cap", type=int, default=4)
    p.add_argument("--assets", help="directory of real product images (optional)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ShortlistError as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
