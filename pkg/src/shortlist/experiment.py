"""Experiment harness: task definitions, correctness oracles, trial scoring.

Tasks combine filter constraints with an objective (any satisfying product,
or the cheapest/best on one attribute).  Complexity is derived from how many
attributes the task touches: two or fewer is simple, three or more complex.
Correctness is judged against an exhaustive scan of the catalog, so the
oracle is independent of any interface the participant used.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence, Union

from .catalog import QUANTITATIVE, Catalog
from .errors import EmptyAnswers, IncompleteTrial, InvalidSurvey, MalformedInput, UnknownTask, WrongInstrument
from .filters import FilterSpec, NumericRange, ValueSet, apply_filter, spec_from_json, spec_to_json
from .stats import AGREE, DISAGREE, NEUTRAL

OBJECTIVE_ANY = "any"
OBJECTIVE_ARGMIN = "argmin"
OBJECTIVE_ARGMAX = "argmax"

SIMPLE = "simple"
COMPLEX = "complex"

VARIANT_TYPICAL = "typical"
VARIANT_VISUALIZATION = "visualization"
INTERFACE_VARIANTS = (VARIANT_TYPICAL, VARIANT_VISUALIZATION)

INSTRUMENT_SATISFACTION = "satisfaction"
INSTRUMENT_EFFICACY = "efficacy"

_EFFICACY_VALUE = {AGREE: 1, NEUTRAL: 0, DISAGREE: -1}


@dataclass(frozen=True)
class Objective:
    kind: str = OBJECTIVE_ANY
    attr: str | None = None

    def __post_init__(self):
        if self.kind not in (OBJECTIVE_ANY, OBJECTIVE_ARGMIN, OBJECTIVE_ARGMAX):
            raise ValueError(f"unknown objective kind {self.kind!r}")
        if (self.kind == OBJECTIVE_ANY) != (self.attr is None):
            raise ValueError("argmin/argmax objectives need an attribute; 'any' takes none")


@dataclass(frozen=True)
class TaskSpec:
    id: str
    description: str
    constraints: FilterSpec
    objective: Objective = field(default_factory=Objective)
    practice: bool = False

    def referenced_attributes(self) -> set[str]:
        attrs = set(self.constraints.clauses)
        if self.objective.attr is not None:
            attrs.add(self.objective.attr)
        return attrs

    @property
    def complexity(self) -> str:
        return SIMPLE if len(self.referenced_attributes()) <= 2 else COMPLEX


@dataclass(frozen=True)
class TrialLog:
    participant_id: str
    interface_variant: str
    task_id: str
    start_ts: float
    end_ts: float | None = None
    answer: str | None = None  # None with end_ts set = abandoned
    session_id: str | None = None

    def __post_init__(self):
        if self.interface_variant not in INTERFACE_VARIANTS:
            raise MalformedInput(f"unknown interface variant {self.interface_variant!r}")
        if self.end_ts is not None and self.end_ts < self.start_ts:
            raise MalformedInput("trial end precedes its start", participant=self.participant_id)

    @property
    def complete(self) -> bool:
        return self.end_ts is not None

    @property
    def duration(self) -> float:
        if self.end_ts is None:
            raise IncompleteTrial("trial has no end timestamp", participant=self.participant_id)
        return self.end_ts - self.start_ts


@dataclass(frozen=True)
class SurveyResponse:
    participant_id: str
    instrument: str
    answers: tuple[str, ...]

    def __post_init__(self):
        if self.instrument not in (INSTRUMENT_SATISFACTION, INSTRUMENT_EFFICACY):
            raise InvalidSurvey(f"unknown instrument {self.instrument!r}")
        object.__setattr__(self, "answers", tuple(self.answers))
        for answer in self.answers:
            if answer not in _EFFICACY_VALUE:
                raise InvalidSurvey(f"unknown answer {answer!r}")
            if self.instrument == INSTRUMENT_SATISFACTION and answer == NEUTRAL:
                raise InvalidSurvey("the satisfaction scale has no Neutral option")


# -- oracles -------------------------------------------------------------------

def correct_answer_set(catalog: Catalog, task: TaskSpec) -> set[str]:
    """All product ids that count as a correct answer for the task.

    objective=any: every product satisfying the constraints; argmin/argmax:
    the full tie set of optima among them.  Products not carrying the
    objective attribute cannot be optima.
    """
    satisfying = apply_filter(catalog, task.constraints)
    if task.objective.kind == OBJECTIVE_ANY:
        return set(satisfying)
    attr = catalog.attribute(task.objective.attr)
    if attr.kind == QUANTITATIVE:
        keyed = [(catalog.product(pid).values[attr.id], pid) for pid in satisfying if catalog.product(pid).carries(attr.id)]
    else:
        keyed = [
            (attr.label_index(catalog.product(pid).values[attr.id]), pid)
            for pid in satisfying
            if catalog.product(pid).carries(attr.id)
        ]
    if not keyed:
        return set()
    best = min(v for v, _ in keyed) if task.objective.kind == OBJECTIVE_ARGMIN else max(v for v, _ in keyed)
    return {pid for v, pid in keyed if v == best}


@dataclass(frozen=True)
class TrialScore:
    correct: bool
    duration_s: int


def score_trial(catalog: Catalog, task: TaskSpec, trial: TrialLog) -> TrialScore:
    """Correctness against the oracle plus duration in whole seconds (half up).

    An abandoned trial (no answer) scores incorrect rather than being
    excluded, keeping per-task denominators fixed.
    """
    if not trial.complete:
        raise IncompleteTrial(
            f"trial for {trial.participant_id!r} / {trial.task_id!r} was never finished",
            participant=trial.participant_id,
            task=trial.task_id,
        )
    correct = trial.answer is not None and trial.answer in correct_answer_set(catalog, task)
    return TrialScore(correct=correct, duration_s=int(math.floor(trial.duration + 0.5)))


def efficacy_score(response: SurveyResponse) -> float:
    """Mean of answers mapped Agree=1, Neutral=0, Disagree=-1."""
    if response.instrument != INSTRUMENT_EFFICACY:
        raise WrongInstrument(
            f"efficacy scoring needs the efficacy instrument, got {response.instrument!r}"
        )
    if not response.answers:
        raise EmptyAnswers("survey response has no answers")
    return sum(_EFFICACY_VALUE[a] for a in response.answers) / len(response.answers)


def assign_ordering(participants: Sequence[str], seed: int = 0) -> dict[str, tuple[str, str]]:
    """Counterbalanced variant order: ceil(n/2) participants start typical-first.

    Deterministic for a given seed; the same participants and seed always
    yield the same assignment.
    """
    if not participants:
        raise EmptyAnswers("participant list must be non-empty")
    shuffled = list(participants)
    random.Random(seed).shuffle(shuffled)
    typical_first = set(shuffled[: math.ceil(len(shuffled) / 2)])
    order = {}
    for participant in participants:
        if participant in typical_first:
            order[participant] = (VARIANT_TYPICAL, VARIANT_VISUALIZATION)
        else:
            order[participant] = (VARIANT_VISUALIZATION, VARIANT_TYPICAL)
    return order


# -- canonical tasks -------------------------------------------------------------

def canonical_tasks() -> list[TaskSpec]:
    """The bundled task set: one simple, three complex, two practice tasks."""
    return [
        TaskSpec(
            id="ST01",
            description="Find a smartphone having battery capacity greater than 2000mAh",
            constraints=FilterSpec({"battery": NumericRange(lo=2000, lo_inclusive=False)}),
        ),
        TaskSpec(
            id="CT01",
            description="Find the lowest priced Android smartphone with at least 4GB RAM and camera above 20Mp",
            constraints=FilterSpec(
                {
                    "os": ValueSet({"Android"}),
                    "ram": NumericRange(lo=4, lo_inclusive=True),
                    "camera": NumericRange(lo=20, lo_inclusive=False),
                }
            ),
            objective=Objective(OBJECTIVE_ARGMIN, "price"),
        ),
        TaskSpec(
            id="CT02",
            description="Find Samsung smartphone of type either Note or Edge that has the highest MP camera",
            constraints=FilterSpec(
                {
                    "brand": ValueSet({"Samsung"}),
                    "model_line": ValueSet({"Note", "Edge"}),
                }
            ),
            objective=Objective(OBJECTIVE_ARGMAX, "camera"),
        ),
        TaskSpec(
            id="CT03",
            description=(
                "Find a smartphone that has: RAM greater than 3 GB, camera greater than 16MP, "
                "and battery more than 3000mAh"
            ),
            constraints=FilterSpec(
                {
                    "ram": NumericRange(lo=3, lo_inclusive=False),
                    "camera": NumericRange(lo=16, lo_inclusive=False),
                    "battery": NumericRange(lo=3000, lo_inclusive=False),
                }
            ),
        ),
        TaskSpec(
            id="PT01",
            description="Find an iPhone with the lowest price",
            constraints=FilterSpec({"brand": ValueSet({"Apple"})}),
            objective=Objective(OBJECTIVE_ARGMIN, "price"),
            practice=True,
        ),
        TaskSpec(
            id="PT02",
            description="Find the highest priced Samsung phone with 6GB RAM",
            constraints=FilterSpec(
                {
                    "brand": ValueSet({"Samsung"}),
                    "ram": NumericRange(lo=6, hi=6),
                }
            ),
            objective=Objective(OBJECTIVE_ARGMAX, "price"),
            practice=True,
        ),
    ]


# -- serialization ---------------------------------------------------------------

def task_to_json(task: TaskSpec) -> dict:
    return {
        "id": task.id,
        "description": task.description,
        "constraints": spec_to_json(task.constraints),
        "objective": {"kind": task.objective.kind, "attr": task.objective.attr},
        "practice": task.practice,
        "complexity": task.complexity,
    }


def task_from_json(obj: dict) -> TaskSpec:
    objective = obj.get("objective") or {}
    return TaskSpec(
        id=obj["id"],
        description=obj.get("description", ""),
        constraints=spec_from_json(obj["constraints"]),
        objective=Objective(objective.get("kind", OBJECTIVE_ANY), objective.get("attr")),
        practice=bool(obj.get("practice", False)),
    )


def load_tasks(source: Union[str, Path, IO]) -> dict[str, TaskSpec]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as f:
            obj = json.load(f)
    else:
        obj = json.load(source)
    tasks = [task_from_json(t) for t in obj["tasks"]]
    return {t.id: t for t in tasks}


def save_tasks(tasks: Iterable[TaskSpec], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump({"tasks": [task_to_json(t) for t in tasks]}, f, indent=2)
        f.write("\n")


def get_task(tasks: Mapping[str, TaskSpec], task_id: str) -> TaskSpec:
    try:
        return tasks[task_id]
    except KeyError:
        raise UnknownTask(f"unknown task {task_id!r}", task=task_id) from None


def trial_to_json(trial: TrialLog) -> dict:
    return {
        "participant_id": trial.participant_id,
        "interface_variant": trial.interface_variant,
        "task_id": trial.task_id,
        "start_ts": trial.start_ts,
        "end_ts": trial.end_ts,
        "answer": trial.answer,
        "session_id": trial.session_id,
    }


def trial_from_json(obj: dict) -> TrialLog:
    return TrialLog(
        participant_id=obj["participant_id"],
        interface_variant=obj["interface_variant"],
        task_id=obj["task_id"],
        start_ts=float(obj["start_ts"]),
        end_ts=None if obj.get("end_ts") is None else float(obj["end_ts"]),
        answer=obj.get("answer"),
        session_id=obj.get("session_id"),
    )


def load_trials(source: Union[str, Path, IO]) -> list[TrialLog]:
    """Read trial records from a JSON-lines file."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as f:
            lines = f.readlines()
    else:
        lines = source.readlines()
    return [trial_from_json(json.loads(line)) for line in lines if line.strip()]


def save_trials(trials: Iterable[TrialLog], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for trial in trials:
            f.write(json.dumps(trial_to_json(trial)) + "\n")


def survey_from_json(obj: dict) -> SurveyResponse:
    return SurveyResponse(
        participant_id=obj["participant_id"],
        instrument=obj["instrument"],
        answers=tuple(obj["answers"]),
    )


def survey_to_json(response: SurveyResponse) -> dict:
    return {
        "participant_id": response.participant_id,
        "instrument": response.instrument,
        "answers": list(response.answers),
    }


def load_surveys(source: Union[str, Path, IO]) -> list[SurveyResponse]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as f:
            obj = json.load(f)
    else:
        obj = json.load(source)
    return [survey_from_json(r) for r in obj["responses"]]
