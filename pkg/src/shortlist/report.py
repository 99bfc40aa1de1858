"""Usability report: efficiency, effectiveness, and satisfaction aggregates.

Builds the per-task and overall comparison between the two interface
variants from scored trials and survey responses.  Efficiency claims
require a one-tailed test below alpha; effectiveness emits no significance
claim when the variants' confidence intervals overlap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .catalog import Catalog
from .errors import IncompleteTrial, UnknownVariant
from .experiment import (
    INSTRUMENT_SATISFACTION,
    INTERFACE_VARIANTS,
    SurveyResponse,
    TaskSpec,
    TrialLog,
    get_task,
    score_trial,
)
from .stats import (
    SampleSummary,
    TestResult,
    accuracy,
    accuracy_fraction,
    ci95,
    intervals_overlap,
    likert_summary,
    summarize,
    t_test_one_tailed,
)


@dataclass
class VariantTaskCell:
    mean_time_s: float
    correct_count: int
    n: int


@dataclass
class UsabilityReport:
    participants: dict[str, int]  # per variant
    tasks: list[str]
    per_task: dict[str, dict[str, VariantTaskCell]]  # task -> variant -> cell
    total_time: dict[str, dict]  # variant -> {mean, sd, n, ci95}
    accuracy_pct: dict[str, float]
    accuracy_exact: dict[str, Fraction]
    efficiency_test: TestResult | None
    efficiency_significant: bool
    effectiveness_cis: dict[str, dict[str, tuple[float, float]]]  # task -> variant -> CI on correct proportion
    effectiveness_overlap: bool
    effectiveness_claim: str | None
    likert_agree_pct: list[int]
    notes: list[str] = field(default_factory=list)


def _proportion_ci(correct: int, n: int) -> tuple[float, float]:
    # per-participant 0/1 outcomes summarized like any other sample
    outcomes = [1.0] * correct + [0.0] * (n - correct)
    summary = summarize(outcomes)
    if summary.sd == 0.0:
        return (summary.mean, summary.mean)
    return ci95(summary)


def build_report(
    catalogs: Mapping[str, Catalog],
    tasks: Mapping[str, TaskSpec],
    trials: Sequence[TrialLog],
    surveys: Sequence[SurveyResponse] = (),
    variant_map: Mapping[str, str] | None = None,
) -> UsabilityReport:
    """Aggregate scored trials into the two-variant comparison.

    variant_map sends each interface variant (typical / visualization) to
    the catalog variant its prototype served; trials are scored against the
    catalog their interface actually showed.
    """
    if variant_map is None:
        if len(catalogs) == 1:
            only = next(iter(catalogs))
            variant_map = {v: only for v in INTERFACE_VARIANTS}
        else:
            raise UnknownVariant("variant_map is required when serving multiple catalogs")
    for interface, catalog_variant in variant_map.items():
        if catalog_variant not in catalogs:
            raise UnknownVariant(f"unknown catalog variant {catalog_variant!r}", variant=catalog_variant)

    scored: list[tuple[TrialLog, bool, int]] = []
    for trial in trials:
        if trial.task_id not in tasks:
            continue  # unknown/practice-only logs are not part of the report
        if tasks[trial.task_id].practice:
            continue
        if not trial.complete:
            raise IncompleteTrial(
                f"unfinished trial for {trial.participant_id!r} / {trial.task_id!r}",
                participant=trial.participant_id,
                task=trial.task_id,
            )
        catalog = catalogs[variant_map[trial.interface_variant]]
        score = score_trial(catalog, get_task(tasks, trial.task_id), trial)
        scored.append((trial, score.correct, score.duration_s))

    task_ids = [t.id for t in tasks.values() if not t.practice]
    per_task: dict[str, dict[str, VariantTaskCell]] = {}
    participants = {
        variant: len({t.participant_id for t, _, _ in scored if t.interface_variant == variant})
        for variant in INTERFACE_VARIANTS
    }

    for task_id in task_ids:
        per_task[task_id] = {}
        for variant in INTERFACE_VARIANTS:
            rows = [(correct, dur) for t, correct, dur in scored if t.task_id == task_id and t.interface_variant == variant]
            if rows:
                cell = VariantTaskCell(
                    mean_time_s=sum(d for _, d in rows) / len(rows),
                    correct_count=sum(1 for c, _ in rows if c),
                    n=len(rows),
                )
            else:
                cell = VariantTaskCell(mean_time_s=0.0, correct_count=0, n=0)
            per_task[task_id][variant] = cell

    total_time: dict[str, dict] = {}
    totals_by_variant: dict[str, list[float]] = {}
    for variant in INTERFACE_VARIANTS:
        by_participant: dict[str, float] = {}
        for trial, _, dur in scored:
            if trial.interface_variant == variant:
                by_participant[trial.participant_id] = by_participant.get(trial.participant_id, 0.0) + dur
        totals = list(by_participant.values())
        totals_by_variant[variant] = totals
        if len(totals) >= 2:
            summary = summarize(totals)
            total_time[variant] = {
                "mean": summary.mean,
                "sd": summary.sd,
                "n": summary.n,
                "ci95": ci95(summary) if summary.sd is not None else None,
            }
        elif totals:
            total_time[variant] = {"mean": totals[0], "sd": None, "n": 1, "ci95": None}
        else:
            total_time[variant] = {"mean": None, "sd": None, "n": 0, "ci95": None}

    accuracy_pct: dict[str, float] = {}
    accuracy_exact: dict[str, Fraction] = {}
    for variant in INTERFACE_VARIANTS:
        counts = [per_task[task_id][variant].correct_count for task_id in task_ids]
        n = participants[variant]
        if n:
            accuracy_pct[variant] = accuracy(counts, n, len(task_ids))
            accuracy_exact[variant] = accuracy_fraction(counts, n, len(task_ids))

    efficiency_test = None
    efficiency_significant = False
    if len(totals_by_variant["typical"]) >= 2 and len(totals_by_variant["visualization"]) >= 2:
        efficiency_test = t_test_one_tailed(
            totals_by_variant["typical"], totals_by_variant["visualization"], mode="welch"
        )
        efficiency_significant = efficiency_test.reject

    effectiveness_cis: dict[str, dict[str, tuple[float, float]]] = {}
    overlap_flags: list[bool] = []
    for task_id in task_ids:
        cis = {}
        for variant in INTERFACE_VARIANTS:
            cell = per_task[task_id][variant]
            if cell.n >= 2:
                cis[variant] = _proportion_ci(cell.correct_count, cell.n)
        if len(cis) == 2:
            overlap_flags.append(intervals_overlap(cis["typical"], cis["visualization"]))
        effectiveness_cis[task_id] = cis
    effectiveness_overlap = bool(overlap_flags) and all(overlap_flags)
    effectiveness_claim = None
    if overlap_flags and not effectiveness_overlap:
        effectiveness_claim = "per-task confidence intervals are disjoint; variants may differ in effectiveness"

    satisfaction = [s for s in surveys if s.instrument == INSTRUMENT_SATISFACTION]
    likert = likert_summary(satisfaction) if satisfaction else []

    return UsabilityReport(
        participants=participants,
        tasks=task_ids,
        per_task=per_task,
        total_time=total_time,
        accuracy_pct=accuracy_pct,
        accuracy_exact=accuracy_exact,
        efficiency_test=efficiency_test,
        efficiency_significant=efficiency_significant,
        effectiveness_cis=effectiveness_cis,
        effectiveness_overlap=effectiveness_overlap,
        effectiveness_claim=effectiveness_claim,
        likert_agree_pct=likert,
        notes=[],
    )


def report_to_json(report: UsabilityReport) -> dict:
    return {
        "participants": report.participants,
        "tasks": report.tasks,
        "per_task": {
            task_id: {
                variant: {
                    "mean_time_s": cell.mean_time_s,
                    "correct_count": cell.correct_count,
                    "n": cell.n,
                }
                for variant, cell in cells.items()
            }
            for task_id, cells in report.per_task.items()
        },
        "total_time": report.total_time,
        "accuracy_pct": report.accuracy_pct,
        "accuracy_exact": {v: [f.numerator, f.denominator] for v, f in report.accuracy_exact.items()},
        "efficiency": {
            "test": None
            if report.efficiency_test is None
            else {
                "t": report.efficiency_test.t,
                "df": report.efficiency_test.df,
                "p_one_tailed": report.efficiency_test.p_one_tailed,
                "alpha": report.efficiency_test.alpha,
                "reject": report.efficiency_test.reject,
            },
            "significant": report.efficiency_significant,
        },
        "effectiveness": {
            "cis": {
                task_id: {variant: list(ci) for variant, ci in cis.items()}
                for task_id, cis in report.effectiveness_cis.items()
            },
            "intervals_overlap": report.effectiveness_overlap,
            "claim": report.effectiveness_claim,
        },
        "likert_agree_pct": report.likert_agree_pct,
        "notes": report.notes,
    }


def table_rows(report: UsabilityReport) -> list[dict]:
    """Rows mirroring the experiment summary table (one row per task)."""
    rows = []
    for task_id in report.tasks:
        cells = report.per_task[task_id]
        rows.append(
            {
                "task": task_id,
                "mean_time_typical_s": cells["typical"].mean_time_s,
                "mean_time_visualization_s": cells["visualization"].mean_time_s,
                "correct_typical": cells["typical"].correct_count,
                "correct_visualization": cells["visualization"].correct_count,
            }
        )
    return rows
