"""HTTP facade over a scenario session.

All endpoints live under /api/v1. Facts travel as source-syntax strings
without the trailing period. Mutations (events, planning, stepping) are
serialized behind one lock; reads are served from an immutable view
that is republished after every mutation, so readers never block and
never see a half-applied update.
"""

from __future__ import annotations

import math
import threading
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .errors import (
    DirtyPlanError,
    EngineError,
    KbSyntaxError,
    NoActivePlanError,
    PlanCompleteError,
    TimestampRegressionError,
    UnsafeQueryError,
)
from .actions import format_ground_action
from .parser import parse_fact, parse_literals
from .planner import PlannerConfig, PlanResult, DEFAULT_CONFIG
from .session import Session
from .terms import Atom, format_atom, format_literal
from .worldmodel import COORD_SCALE, EventRecord

HAZARD_PREDICATES = ("fire", "police_block", "fireman_operation")


class EventBody(BaseModel):
    t: int = Field(ge=0)
    op: str = Field(pattern="^(assert|retract)$")
    fact: str


class ConfigBody(BaseModel):
    max_depth: int = DEFAULT_CONFIG.max_depth
    max_expansions: int = DEFAULT_CONFIG.max_expansions
    time_budget_ms: int = DEFAULT_CONFIG.time_budget_ms

    def to_config(self) -> PlannerConfig:
        return PlannerConfig(self.max_depth, self.max_expansions,
                             self.time_budget_ms)


class PlanBody(BaseModel):
    goal: str
    config: ConfigBody | None = None


class WhatIfBody(BaseModel):
    events: list[EventBody] = Field(default_factory=list)
    goal: str
    config: ConfigBody | None = None


class ApiFault(Exception):
    def __init__(self, status: int, kind: str, detail: str):
        super().__init__(detail)
        self.status = status
        self.kind = kind
        self.detail = detail


_FAULT_MAP: list[tuple[type, int, str]] = [
    (KbSyntaxError, 400, "parse_error"),
    (UnsafeQueryError, 400, "unsafe_query"),
    (TimestampRegressionError, 409, "timestamp_regression"),
    (DirtyPlanError, 409, "dirty_plan"),
    (PlanCompleteError, 409, "plan_complete"),
    (NoActivePlanError, 404, "no_active_plan"),
]


def _fault(exc: EngineError) -> ApiFault:
    for etype, status, kind in _FAULT_MAP:
        if isinstance(exc, etype):
            return ApiFault(status, kind, str(exc))
    return ApiFault(400, "engine_error", str(exc))


# ==== view assembly =========================================================

def _fact_strings(atoms) -> list[str]:
    from .worldmodel import canonical_facts
    return [format_atom(a) for a in canonical_facts(atoms)]


def _positions(session: Session) -> dict[str, tuple[float, float]]:
    nodes = sorted(a.args[0].name for a in session.facts if a.key == ("node", 1))
    out: dict[str, tuple[float, float]] = {}
    for atom in session.facts:
        if atom.key == ("position", 3):
            out[atom.args[0].name] = (atom.args[1].value / COORD_SCALE,
                                      atom.args[2].value / COORD_SCALE)
    missing = [n for n in nodes if n not in out]
    for i, name in enumerate(missing):
        # deterministic circle fallback for bundles without coordinates
        angle = 2 * math.pi * i / max(len(missing), 1)
        out[name] = (round(100 * math.cos(angle), 3), round(100 * math.sin(angle), 3))
    return out


def _graph_view(session: Session) -> dict[str, Any]:
    derived = session.derived().derived
    safe = {a.args[0].name for a in derived if a.key == ("safe_area", 1)}
    positions = _positions(session)
    nodes = [{"name": name, "x": positions[name][0], "y": positions[name][1],
              "safe": name in safe}
             for name in sorted(a.args[0].name for a in session.facts
                                if a.key == ("node", 1))]

    hazards: dict[str, set[frozenset[str]]] = {p: set() for p in HAZARD_PREDICATES}
    for atom in session.facts:
        if atom.predicate in hazards and len(atom.args) == 2:
            hazards[atom.predicate].add(frozenset((atom.args[0].name, atom.args[1].name)))

    edges = []
    seen: set[frozenset[str]] = set()
    for atom in sorted((a for a in session.facts if a.key == ("link", 2)),
                       key=lambda a: (a.args[0].name, a.args[1].name)):
        pair = frozenset((atom.args[0].name, atom.args[1].name))
        if pair in seen:
            continue
        seen.add(pair)
        a, b = sorted(pair)
        edges.append({"a": a, "b": b,
                      "overlays": [p for p in HAZARD_PREDICATES
                                   if pair in hazards[p]]})

    resources = [{"id": r.id, "kind": r.kind, "subtype": r.subtype,
                  "location": r.location} for r in session.resources()]
    return {"nodes": nodes, "edges": edges, "resources": resources}


def _state_view(session: Session) -> dict[str, Any]:
    return {"facts": _fact_strings(session.facts),
            "derived": _fact_strings(session.derived().derived),
            "clock": session.clock}


def _plan_view(session: Session) -> dict[str, Any]:
    if session.plan is None or session.goal is None:
        return {"status": "none"}
    steps = [{"n": i + 1,
              "action": format_ground_action(step),
              "del": [format_atom(a) for a in step.deletes],
              "add": [format_atom(a) for a in step.adds]}
             for i, step in enumerate(session.plan.steps)]
    return {"status": "plan",
            "goal": ", ".join(format_literal(l) for l in session.goal),
            "steps": steps,
            "cursor": session.cursor,
            "done": session.cursor >= len(session.plan.steps),
            "dirty": session.dirty}


def _plan_result_payload(result: PlanResult) -> dict[str, Any]:
    s = result.stats
    payload: dict[str, Any] = {
        "status": result.status,
        "stats": {"expanded": s.expanded, "generated": s.generated,
                  "duplicates_pruned": s.duplicates_pruned,
                  "max_frontier": s.max_frontier, "elapsed_ms": s.elapsed_ms}}
    if result.plan is not None:
        payload["steps"] = [{"n": i + 1,
                             "action": format_ground_action(step),
                             "del": [format_atom(a) for a in step.deletes],
                             "add": [format_atom(a) for a in step.adds]}
                            for i, step in enumerate(result.plan.steps)]
        payload["proven_minimal"] = result.plan.proven_minimal
    return payload


# ==== app ===================================================================

def create_app(session: Session, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="rescueplan service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"])

    lock = threading.Lock()
    view: dict[str, Any] = {}

    def publish() -> None:
        view.update({"graph": _graph_view(session),
                     "state": _state_view(session),
                     "plan": _plan_view(session)})

    publish()

    @app.exception_handler(ApiFault)
    async def fault_handler(_request: Request, exc: ApiFault):
        return JSONResponse(status_code=exc.status,
                            content={"kind": exc.kind, "detail": exc.detail})

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400,
                            content={"kind": "invalid_request", "detail": str(exc)})

    def _event_record(body: EventBody) -> EventRecord:
        return EventRecord(body.t, body.op, parse_fact(body.fact, "fact"))

    def _goal(text: str):
        return parse_literals(text, "goal")

    def _cfg(body) -> PlannerConfig:
        return body.config.to_config() if body and body.config else DEFAULT_CONFIG

    @app.get("/api/v1/graph")
    def get_graph():
        return view["graph"]

    @app.get("/api/v1/state")
    def get_state():
        return view["state"]

    @app.get("/api/v1/plan")
    def get_plan():
        return view["plan"]

    @app.post("/api/v1/events")
    def post_event(body: EventBody):
        try:
            record = _event_record(body)
            with lock:
                changed = session.post_event(record)
                publish()
                return {"changed": changed, "clock": session.clock,
                        "plan_dirty": session.dirty}
        except EngineError as exc:
            raise _fault(exc)

    @app.post("/api/v1/plan")
    def post_plan(body: PlanBody):
        try:
            goal = _goal(body.goal)
            with lock:
                result = session.request_plan(goal, _cfg(body))
                publish()
                return _plan_result_payload(result)
        except EngineError as exc:
            raise _fault(exc)

    @app.post("/api/v1/whatif")
    def post_whatif(body: WhatIfBody):
        try:
            events = [_event_record(e) for e in body.events]
            goal = _goal(body.goal)
            with lock:
                result = session.what_if(events, goal, _cfg(body))
                return _plan_result_payload(result)
        except EngineError as exc:
            raise _fault(exc)

    @app.post("/api/v1/execute-step")
    def post_execute_step():
        try:
            with lock:
                step, cursor, done = session.execute_step()
                publish()
                return {"action": format_ground_action(step), "cursor": cursor,
                        "done": done, "clock": session.clock}
        except EngineError as exc:
            raise _fault(exc)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="console")

    return app
