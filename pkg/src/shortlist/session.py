"""Consideration-set sessions: the state machine tying the four stages together.

A session progresses Filtering -> ComparativeView -> Comparison -> Decided,
with backwards moves allowed everywhere except out of the terminal Decided
stage.  Every mutation is recorded as an event and applied through the same
handler replay uses, so folding the event log always reconstructs the exact
live state.

The store serializes writes per session id; reads return plain-data
snapshots and may run concurrently.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .catalog import Catalog
from .errors import (
    BucketFull,
    IllegalTransition,
    NotInBucket,
    NotInFilteredSet,
    UnknownSession,
    UnknownVariant,
    WrongStage,
)
from .filters import FilterSpec, apply_filter, spec_from_json, spec_to_json
from .wheel import (
    WheelIndex,
    WheelState,
    build_wheel,
    selected_attribute_ids,
    selected_filter_spec,
    state_from_json,
    state_to_json,
    toggle_expand,
    toggle_select,
    validate_selection,
)

STAGE_FILTERING = "Filtering"
STAGE_COMPARATIVE = "ComparativeView"
STAGE_COMPARISON = "Comparison"
STAGE_DECIDED = "Decided"
STAGES = (STAGE_FILTERING, STAGE_COMPARATIVE, STAGE_COMPARISON, STAGE_DECIDED)

#: transitions advance() may perform; Comparison -> Decided happens only via decide()
LEGAL_TRANSITIONS = {
    (STAGE_FILTERING, STAGE_COMPARATIVE),
    (STAGE_COMPARATIVE, STAGE_FILTERING),
    (STAGE_COMPARATIVE, STAGE_COMPARISON),
    (STAGE_COMPARISON, STAGE_COMPARATIVE),
}

#: stages in which filters (wheel or direct spec) may change
FILTERING_STAGES = (STAGE_FILTERING, STAGE_COMPARATIVE)

EV_CREATED = "created"
EV_WHEEL = "wheel_state"
EV_FILTER = "filter_applied"
EV_BUCKET = "bucket_toggled"
EV_ADVANCED = "advanced"
EV_DECIDED = "decided"

DEFAULT_BUCKET_CAP = 4


@dataclass(frozen=True)
class Event:
    ts: float
    kind: str
    payload: dict

    def to_json(self) -> dict:
        return {"ts": self.ts, "kind": self.kind, "payload": self.payload}

    @staticmethod
    def from_json(obj: dict) -> "Event":
        return Event(ts=obj["ts"], kind=obj["kind"], payload=obj["payload"])


@dataclass
class Session:
    id: str
    catalog_variant: str
    stage: str = STAGE_FILTERING
    wheel_state: WheelState = field(default_factory=WheelState)
    filter_spec: FilterSpec = field(default_factory=FilterSpec)
    filtered: tuple[str, ...] = ()
    bucket: tuple[str, ...] = ()
    final_choice: str | None = None
    events: list[Event] = field(default_factory=list)

    def last_ts(self) -> float:
        return self.events[-1].ts if self.events else 0.0


def session_to_json(session: Session) -> dict:
    return {
        "id": session.id,
        "catalog_variant": session.catalog_variant,
        "stage": session.stage,
        "wheel_state": state_to_json(session.wheel_state),
        "filter_spec": spec_to_json(session.filter_spec),
        "filtered": list(session.filtered),
        "filtered_count": len(session.filtered),
        "bucket": list(session.bucket),
        "final_choice": session.final_choice,
        "events": [e.to_json() for e in session.events],
    }


def _apply_event(session: Session, catalog: Catalog, index: WheelIndex, event: Event) -> None:
    """Single source of truth for how an event mutates a session.

    Live operations validate, then call this; replay calls it directly.
    """
    payload = event.payload
    if event.kind == EV_CREATED:
        session.stage = STAGE_FILTERING
        session.wheel_state = WheelState()
        session.filter_spec = FilterSpec()
        session.filtered = catalog.product_ids
        session.bucket = ()
        session.final_choice = None
    elif event.kind == EV_WHEEL:
        state = state_from_json(payload)
        session.wheel_state = state
        session.filter_spec = selected_filter_spec(index, state)
        session.filtered = tuple(apply_filter(catalog, session.filter_spec))
    elif event.kind == EV_FILTER:
        spec = spec_from_json(payload["spec"])
        session.filter_spec = spec
        session.filtered = tuple(apply_filter(catalog, spec))
    elif event.kind == EV_BUCKET:
        pid = payload["product_id"]
        if pid in session.bucket:
            session.bucket = tuple(p for p in session.bucket if p != pid)
        else:
            session.bucket = session.bucket + (pid,)
    elif event.kind == EV_ADVANCED:
        session.stage = payload["to"]
    elif event.kind == EV_DECIDED:
        session.final_choice = payload["product_id"]
        session.stage = STAGE_DECIDED
    else:
        raise ValueError(f"unknown event kind {event.kind!r}")
    session.events.append(event)


def replay_session(catalogs: Mapping[str, Catalog], events: Iterable[Event]) -> Session:
    """Rebuild a session purely from its event log."""
    events = list(events)
    if not events or events[0].kind != EV_CREATED:
        raise ValueError("event log must start with a created event")
    first = events[0].payload
    variant = first["catalog_variant"]
    if variant not in catalogs:
        raise UnknownVariant(f"unknown catalog variant {variant!r}", variant=variant)
    catalog = catalogs[variant]
    index = WheelIndex(build_wheel(catalog))
    session = Session(id=first["session_id"], catalog_variant=variant)
    for event in events:
        _apply_event(session, catalog, index, event)
    return session


class SessionStore:
    """Owns sessions over a set of catalog variants; one writer per session."""

    def __init__(
        self,
        catalogs: Mapping[str, Catalog],
        bucket_cap: int = DEFAULT_BUCKET_CAP,
        clock: Callable[[], float] = time.time,
    ):
        self._catalogs = dict(catalogs)
        self._bucket_cap = bucket_cap
        self._clock = clock
        self._wheel_indexes = {
            variant: WheelIndex(build_wheel(catalog)) for variant, catalog in self._catalogs.items()
        }
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._counter = 0

    # -- lookups ---------------------------------------------------------

    @property
    def bucket_cap(self) -> int:
        return self._bucket_cap

    @property
    def variants(self) -> tuple[str, ...]:
        return tuple(self._catalogs)

    def catalog(self, variant: str) -> Catalog:
        try:
            return self._catalogs[variant]
        except KeyError:
            raise UnknownVariant(f"unknown catalog variant {variant!r}", variant=variant) from None

    def wheel_index(self, variant: str) -> WheelIndex:
        self.catalog(variant)
        return self._wheel_indexes[variant]

    def get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise UnknownSession(f"unknown session {session_id!r}", session=session_id) from None

    def find_product(self, product_id: str):
        """(catalog, product) across all variants; ids are unique by construction."""
        for catalog in self._catalogs.values():
            if catalog.has_product(product_id):
                return catalog, catalog.product(product_id)
        return None

    # -- mutations ---------------------------------------------------------

    def _lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks[session_id]

    def _record(self, session: Session, kind: str, payload: dict) -> Event:
        ts = max(self._clock(), session.last_ts())
        event = Event(ts=ts, kind=kind, payload=payload)
        catalog = self._catalogs[session.catalog_variant]
        index = self._wheel_indexes[session.catalog_variant]
        _apply_event(session, catalog, index, event)
        return event

    def new_session(self, variant: str) -> Session:
        self.catalog(variant)
        with self._registry_lock:
            self._counter += 1
            session_id = f"s{self._counter:04d}"
            session = Session(id=session_id, catalog_variant=variant)
            self._sessions[session_id] = session
            self._locks[session_id] = threading.Lock()
        with self._locks[session_id]:
            self._record(session, EV_CREATED, {"session_id": session_id, "catalog_variant": variant})
        return session

    def _require_stage(self, session: Session, stages: Sequence[str], action: str) -> None:
        if session.stage not in stages:
            raise WrongStage(
                f"{action} is not allowed in stage {session.stage}", stage=session.stage, action=action
            )

    def set_wheel_selection(self, session_id: str, selected: Iterable[str], expanded: Iterable[str] | None = None) -> Session:
        session = self.get(session_id)
        with self._lock(session_id):
            self._require_stage(session, FILTERING_STAGES, "changing the wheel selection")
            index = self._wheel_indexes[session.catalog_variant]
            ids = validate_selection(index, selected)
            exp = session.wheel_state.expanded if expanded is None else frozenset(expanded)
            state = WheelState(expanded=exp, selected=ids)
            self._record(session, EV_WHEEL, state_to_json(state))
        return session

    def toggle_wheel_node(self, session_id: str, node_id: str) -> Session:
        session = self.get(session_id)
        with self._lock(session_id):
            self._require_stage(session, FILTERING_STAGES, "changing the wheel selection")
            index = self._wheel_indexes[session.catalog_variant]
            state = toggle_select(index, session.wheel_state, node_id)
            self._record(session, EV_WHEEL, state_to_json(state))
        return session

    def toggle_wheel_expand(self, session_id: str, node_id: str) -> Session:
        session = self.get(session_id)
        with self._lock(session_id):
            if session.stage == STAGE_DECIDED:
                raise WrongStage("session is decided", stage=session.stage, action="expanding the wheel")
            index = self._wheel_indexes[session.catalog_variant]
            state = toggle_expand(index, session.wheel_state, node_id)
            self._record(session, EV_WHEEL, state_to_json(state))
        return session

    def apply_filter_spec(self, session_id: str, spec: FilterSpec) -> Session:
        session = self.get(session_id)
        with self._lock(session_id):
            self._require_stage(session, FILTERING_STAGES, "applying a filter")
            apply_filter(self._catalogs[session.catalog_variant], spec)  # validate before recording
            self._record(session, EV_FILTER, {"spec": spec_to_json(spec)})
        return session

    def toggle_bucket(self, session_id: str, product_id: str) -> Session:
        session = self.get(session_id)
        with self._lock(session_id):
            self._require_stage(session, (STAGE_COMPARATIVE,), "editing the compare bucket")
            if product_id not in session.bucket:
                catalog = self._catalogs[session.catalog_variant]
                catalog.product(product_id)
                if product_id not in session.filtered:
                    raise NotInFilteredSet(
                        f"product {product_id!r} is not in the current filtered set", product=product_id
                    )
                if len(session.bucket) >= self._bucket_cap:
                    raise BucketFull(
                        f"compare bucket is limited to {self._bucket_cap} products", cap=self._bucket_cap
                    )
            self._record(session, EV_BUCKET, {"product_id": product_id})
        return session

    def advance(self, session_id: str, target_stage: str) -> Session:
        session = self.get(session_id)
        with self._lock(session_id):
            source = session.stage
            if (source, target_stage) not in LEGAL_TRANSITIONS:
                raise IllegalTransition(
                    f"cannot advance from {source} to {target_stage}", source=source, target=target_stage
                )
            if target_stage == STAGE_COMPARISON and not session.bucket:
                raise IllegalTransition(
                    "cannot enter Comparison with an empty compare bucket",
                    source=source,
                    target=target_stage,
                )
            self._record(session, EV_ADVANCED, {"from": source, "to": target_stage})
        return session

    def decide(self, session_id: str, product_id: str) -> Session:
        session = self.get(session_id)
        with self._lock(session_id):
            if session.stage != STAGE_COMPARISON:
                raise WrongStage(
                    f"deciding requires stage {STAGE_COMPARISON}, session is in {session.stage}",
                    stage=session.stage,
                    action="decide",
                )
            if product_id not in session.bucket:
                raise NotInBucket(f"product {product_id!r} is not in the compare bucket", product=product_id)
            self._record(session, EV_DECIDED, {"product_id": product_id})
        return session

    # -- reads ---------------------------------------------------------

    def snapshot(self, session_id: str) -> dict:
        session = self.get(session_id)
        with self._lock(session_id):
            return session_to_json(session)

    def selected_chart_attributes(self, session_id: str) -> list[str]:
        """Wheel-selected comparable attributes, falling back to all comparable."""
        session = self.get(session_id)
        catalog = self._catalogs[session.catalog_variant]
        index = self._wheel_indexes[session.catalog_variant]
        with self._lock(session_id):
            touched = selected_attribute_ids(index, session.wheel_state)
        comparable = [a for a in touched if catalog.attribute(a).is_comparable]
        return comparable or list(catalog.comparable_attribute_ids())
