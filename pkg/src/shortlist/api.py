"""HTTP/JSON boundary exposing the engine to UI clients and the harness.

Every engine error maps to exactly one machine-readable code with a 400,
404, or 409 status.  Timestamps (session events, trial starts/finishes) are
assigned server-side at receipt so one clock orders everything.

Both experimental arms are served by this one engine: the visualization arm
uses the wheel/scatter/comparison endpoints, the baseline arm uses direct
filters plus the raw-value comparison table, and both share the same
correctness oracle.
"""

from __future__ import annotations

import threading
import time
from pathlib import Path
from typing import Callable, Mapping, Sequence

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .catalog import Catalog, attribute_to_json
from .chart import build_chart, chart_to_json
from .detail import detail_to_json, format_value, product_detail
from .errors import EmptyBucket, MalformedInput, ShortlistError, UnknownTrial
from .experiment import (
    INTERFACE_VARIANTS,
    SurveyResponse,
    TaskSpec,
    TrialLog,
    canonical_tasks,
    get_task,
    score_trial,
    task_to_json,
    trial_to_json,
)
from .filters import spec_from_json
from .report import build_report, report_to_json
from .scatter import dominant_set, scatter_projection
from .session import SessionStore, session_to_json
from .wheel import wheel_to_json


class CreateSessionBody(BaseModel):
    catalog_variant: str


class FilterBody(BaseModel):
    clauses: dict


class WheelBody(BaseModel):
    selected: list[str]
    expanded: list[str] | None = None


class BucketBody(BaseModel):
    product_id: str


class AdvanceBody(BaseModel):
    target: str


class DecideBody(BaseModel):
    product_id: str


class TrialStartBody(BaseModel):
    participant_id: str
    interface_variant: str
    task_id: str
    session_id: str | None = None


class TrialFinishBody(BaseModel):
    trial_id: str
    answer: str | None = None


def _placeholder_svg(ref: str) -> str:
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" width="240" height="240">'
        '<rect width="240" height="240" fill="#e8edf2"/>'
        f'<text x="120" y="124" text-anchor="middle" font-family="sans-serif" font-size="14">{ref}</text>'
        "</svg>"
    )


class AppState:
    """Mutable server state: sessions, trial records, surveys."""

    def __init__(
        self,
        catalogs: Mapping[str, Catalog],
        bucket_cap: int = 4,
        clock: Callable[[], float] = time.time,
        tasks: Mapping[str, TaskSpec] | None = None,
        variant_map: Mapping[str, str] | None = None,
        surveys: Sequence[SurveyResponse] = (),
        assets_dir: str | None = None,
    ):
        self.store = SessionStore(catalogs, bucket_cap=bucket_cap, clock=clock)
        self.clock = clock
        self.tasks = dict(tasks) if tasks is not None else {t.id: t for t in canonical_tasks()}
        variants = list(catalogs)
        if variant_map is None:
            variant_map = {
                "typical": variants[0],
                "visualization": variants[-1],
            }
        self.variant_map = dict(variant_map)
        self.surveys = list(surveys)
        self.assets_dir = Path(assets_dir) if assets_dir else None
        self._trials: dict[str, dict] = {}
        self._trial_lock = threading.Lock()
        self._trial_counter = 0

    @property
    def default_variant(self) -> str:
        return self.store.variants[0]

    def start_trial(self, body: TrialStartBody) -> dict:
        if body.interface_variant not in INTERFACE_VARIANTS:
            raise MalformedInput(f"unknown interface variant {body.interface_variant!r}")
        task = get_task(self.tasks, body.task_id)
        with self._trial_lock:
            self._trial_counter += 1
            trial_id = f"t{self._trial_counter:05d}"
            record = {
                "trial_id": trial_id,
                "participant_id": body.participant_id,
                "interface_variant": body.interface_variant,
                "task_id": task.id,
                "session_id": body.session_id,
                "start_ts": self.clock(),
                "end_ts": None,
                "answer": None,
            }
            self._trials[trial_id] = record
        return record

    def finish_trial(self, body: TrialFinishBody) -> dict:
        with self._trial_lock:
            record = self._trials.get(body.trial_id)
            if record is None:
                raise UnknownTrial(f"unknown trial {body.trial_id!r}", trial=body.trial_id)
            record["end_ts"] = max(self.clock(), record["start_ts"])
            record["answer"] = body.answer
        trial = self._as_trial(record)
        task = get_task(self.tasks, record["task_id"])
        catalog = self.store.catalog(self.variant_map[record["interface_variant"]])
        score = score_trial(catalog, task, trial)
        return {
            "trial_id": record["trial_id"],
            "correct": score.correct,
            "duration_s": score.duration_s,
            "trial": trial_to_json(trial),
        }

    @staticmethod
    def _as_trial(record: dict) -> TrialLog:
        return TrialLog(
            participant_id=record["participant_id"],
            interface_variant=record["interface_variant"],
            task_id=record["task_id"],
            start_ts=record["start_ts"],
            end_ts=record["end_ts"],
            answer=record["answer"],
            session_id=record["session_id"],
        )

    def finished_trials(self) -> list[TrialLog]:
        with self._trial_lock:
            return [self._as_trial(r) for r in self._trials.values() if r["end_ts"] is not None]


def create_app(state: AppState) -> FastAPI:
    app = FastAPI(title="shortlist", docs_url=None, redoc_url=None)
    store = state.store

    @app.exception_handler(ShortlistError)
    async def engine_error(_request: Request, exc: ShortlistError):
        return JSONResponse(status_code=exc.http_status, content=exc.to_payload())

    @app.exception_handler(RequestValidationError)
    async def validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "MALFORMED_INPUT", "message": "request body failed validation", "details": {"errors": exc.errors()}},
        )

    @app.get("/catalog/schema")
    def catalog_schema(variant: str | None = None):
        catalog = store.catalog(variant or state.default_variant)
        return {
            "variant_tag": catalog.variant_tag,
            "variants": list(store.variants),
            "schema": [attribute_to_json(a) for a in catalog.schema],
            "product_count": len(catalog.products),
        }

    @app.get("/wheel")
    def wheel(variant: str | None = None):
        index = store.wheel_index(variant or state.default_variant)
        return wheel_to_json(index.root)

    @app.get("/tasks")
    def tasks():
        return {"tasks": [task_to_json(t) for t in state.tasks.values()]}

    @app.post("/session")
    def create_session(body: CreateSessionBody):
        session = store.new_session(body.catalog_variant)
        return store.snapshot(session.id)

    @app.get("/session/{session_id}")
    def get_session(session_id: str):
        return store.snapshot(session_id)

    @app.post("/session/{session_id}/filter")
    def post_filter(session_id: str, body: FilterBody):
        spec = spec_from_json(body.model_dump())
        session = store.apply_filter_spec(session_id, spec)
        return {"product_ids": list(session.filtered), "count": len(session.filtered)}

    @app.post("/session/{session_id}/wheel")
    def post_wheel(session_id: str, body: WheelBody):
        session = store.set_wheel_selection(session_id, body.selected, body.expanded)
        return store.snapshot(session.id)

    @app.get("/session/{session_id}/scatter")
    def get_scatter(session_id: str, x: str, y: str):
        session = store.get(session_id)
        catalog = store.catalog(session.catalog_variant)
        projection = scatter_projection(catalog, session.filtered, x, y, bucket=session.bucket)
        dominant = dominant_set(catalog, session.filtered, [x, y])
        return {
            "x_attr": projection.x_attr,
            "y_attr": projection.y_attr,
            "x_range": list(projection.x_range),
            "y_range": list(projection.y_range),
            "preferred_corner": projection.preferred_corner,
            "points": [
                {
                    "product_id": p.product_id,
                    "x": p.x,
                    "y": p.y,
                    "in_bucket": p.in_bucket,
                    "dominant": p.product_id in dominant,
                    "name": catalog.product(p.product_id).name,
                }
                for p in projection.points
            ],
        }

    @app.get("/product/{product_id}")
    def get_product(product_id: str, variant: str | None = None):
        if variant is not None:
            catalog = store.catalog(variant)
        else:
            found = store.find_product(product_id)
            catalog = found[0] if found else store.catalog(state.default_variant)
        return detail_to_json(product_detail(catalog, product_id))

    @app.post("/session/{session_id}/bucket")
    def post_bucket(session_id: str, body: BucketBody):
        session = store.toggle_bucket(session_id, body.product_id)
        return {"bucket": list(session.bucket)}

    @app.get("/session/{session_id}/comparison")
    def get_comparison(session_id: str, attrs: str | None = None):
        session = store.get(session_id)
        catalog = store.catalog(session.catalog_variant)
        attr_ids = [a for a in attrs.split(",") if a] if attrs else store.selected_chart_attributes(session_id)
        chart = build_chart(catalog, list(session.bucket), attr_ids)
        payload = chart_to_json(chart)
        payload["product_names"] = {pid: catalog.product(pid).name for pid, _ in chart.products}
        return payload

    @app.get("/session/{session_id}/comparison-table")
    def get_comparison_table(session_id: str):
        session = store.get(session_id)
        catalog = store.catalog(session.catalog_variant)
        if not session.bucket:
            raise EmptyBucket("the compare bucket is empty")
        products = [catalog.product(pid) for pid in session.bucket]
        rows = []
        for attr in catalog.schema:
            rows.append(
                {
                    "attr_id": attr.id,
                    "display_name": attr.display_name,
                    "unit": attr.unit,
                    "values": {
                        p.id: (format_value(attr, p.values[attr.id]) if p.carries(attr.id) else None)
                        for p in products
                    },
                }
            )
        return {
            "products": [{"id": p.id, "name": p.name, "image_refs": list(p.image_refs)} for p in products],
            "rows": rows,
        }

    @app.post("/session/{session_id}/advance")
    def post_advance(session_id: str, body: AdvanceBody):
        store.advance(session_id, body.target)
        return store.snapshot(session_id)

    @app.post("/session/{session_id}/decide")
    def post_decide(session_id: str, body: DecideBody):
        store.decide(session_id, body.product_id)
        return store.snapshot(session_id)

    @app.post("/trial/start")
    def trial_start(body: TrialStartBody):
        record = state.start_trial(body)
        task = state.tasks[record["task_id"]]
        return {
            "trial_id": record["trial_id"],
            "start_ts": record["start_ts"],
            "task": task_to_json(task),
        }

    @app.post("/trial/finish")
    def trial_finish(body: TrialFinishBody):
        return state.finish_trial(body)

    @app.get("/report")
    def report():
        catalogs = {v: store.catalog(v) for v in store.variants}
        built = build_report(
            catalogs,
            state.tasks,
            state.finished_trials(),
            surveys=state.surveys,
            variant_map=state.variant_map,
        )
        return report_to_json(built)

    @app.get("/assets/{ref:path}")
    def assets(ref: str):
        if state.assets_dir is not None:
            candidate = (state.assets_dir / ref).resolve()
            if candidate.is_file() and state.assets_dir.resolve() in candidate.parents:
                return Response(candidate.read_bytes(), media_type="application/octet-stream")
        return Response(_placeholder_svg(ref), media_type="image/svg+xml")

    return app
