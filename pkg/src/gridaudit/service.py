"""Embedded HTTP service for interactive auditing.

Sessions live in memory, expire after 30 idle minutes, and each one owns
a sheet, its analysis caches, and the current sink curation.  Responses
reuse the CLI report builders so a request and the matching CLI run
return the same document (timings aside).  Domain errors map to machine
codes: 409 for curation conflicts, 404 for unknown sessions and
modules, 422 for everything malformed.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from gridaudit.classes import ClassParams, GeometryParams
from gridaudit.equivalence import level_from_name
from gridaudit.errors import GridAuditError, MalformedWorkbook
from gridaudit.grid import CellAddr, load_workbook, parse_a1
from gridaudit.modules import SinkCuration, curate_init, exclude_sink, restore_sink
from gridaudit.pipeline import (
    Analysis,
    _input_summary,
    build_areas_report,
    build_classes_report,
    build_diff_report,
    build_grid_report,
    build_modules_report,
    build_srg,
    build_srg_report,
    build_trace_report,
    error_json,
)
from gridaudit.srg import to_dot as srg_to_dot

SESSION_TTL = 30.0 * 60.0


class UnknownSession(GridAuditError):
    """No live session with this id."""


_STATUS = {"NotASink": 409, "UnknownModule": 404, "UnknownSession": 404}


@dataclass
class Session:
    id: str
    analysis: Analysis
    curation: SinkCuration | None = None
    last_class_params: ClassParams | None = None
    touched: float = 0.0
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self, ttl: float = SESSION_TTL):
        self.ttl = ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _purge(self, now: float) -> None:
        stale = [
            sid
            for sid, s in self._sessions.items()
            if now - s.touched > self.ttl
        ]
        for sid in stale:
            del self._sessions[sid]

    def create(self, analysis: Analysis) -> Session:
        session = Session(
            id=uuid.uuid4().hex, analysis=analysis, touched=time.monotonic()
        )
        with self._lock:
            self._purge(session.touched)
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        now = time.monotonic()
        with self._lock:
            self._purge(now)
            session = self._sessions.get(session_id)
            if session is None:
                raise UnknownSession(f"no session {session_id!r}")
            session.touched = now
            return session


def _ensure_curation(session: Session) -> SinkCuration:
    """Caller must hold session.lock."""
    if session.curation is None:
        session.curation = curate_init(session.analysis.ddg)
    return session.curation


def _curation(session: Session) -> SinkCuration:
    """Sink curation is created on first use so cyclic sheets can still
    serve the grid and area views."""
    with session.lock:
        return _ensure_curation(session)


def _class_params(
    dh: int, dv: int, dman: int | None, eq_start: str, eq_rest: str
) -> ClassParams:
    return ClassParams(
        geometry=GeometryParams(d_h=dh, d_v=dv, d_man=dman),
        eq_start=level_from_name(eq_start),
        eq_rest=level_from_name(eq_rest),
    )


async def _sheet_from_request(request: Request):
    raw = await request.body()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise MalformedWorkbook("workbook body must be UTF-8 text") from None
    content_type = request.headers.get("content-type", "")
    if "json" in content_type:
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedWorkbook(f"bad JSON: {exc}") from None
        if isinstance(payload, dict) and isinstance(payload.get("csv"), str):
            return load_workbook(
                payload["csv"], "csv", name=str(payload.get("name", "sheet"))
            )
        return load_workbook(text, "json")
    return load_workbook(text, "csv")


def _curation_report(session: Session) -> dict:
    cur = _curation(session)
    analysis = session.analysis
    return {
        "schema": 1,
        "command": "sinks",
        "input": _input_summary(analysis),
        "parameters": {},
        "payload": {
            "active": [a.a1() for a in cur.active],
            "excluded": [a.a1() for a in sorted(cur.excluded)],
            "history": [a.a1() for a in cur.history],
        },
        "diagnostics": [],
        "timings": {"total_ms": 0.0},
    }


def create_app(ttl: float = SESSION_TTL) -> FastAPI:
    app = FastAPI(title="gridaudit", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(ttl=ttl)
    app.state.sessions = store

    @app.exception_handler(GridAuditError)
    async def _domain_error(request: Request, exc: GridAuditError):
        return JSONResponse(
            status_code=_STATUS.get(exc.code, 422), content=error_json(exc)
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        detail = "; ".join(
            f"{'.'.join(str(p) for p in err.get('loc', ()))}: {err.get('msg')}"
            for err in exc.errors()
        )
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "InvalidParams", "message": detail}},
        )

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        sheet = await _sheet_from_request(request)
        analysis = Analysis(sheet)
        session = store.create(analysis)
        return {"session": session.id, "input": _input_summary(analysis)}

    @app.get("/sessions/{session_id}/grid")
    def get_grid(session_id: str):
        session = store.get(session_id)
        return build_grid_report(session.analysis)

    @app.get("/sessions/{session_id}/areas")
    def get_areas(session_id: str, level: str = Query(...)):
        session = store.get(session_id)
        return build_areas_report(session.analysis, level_from_name(level))

    @app.get("/sessions/{session_id}/classes")
    def get_classes(
        session_id: str,
        dh: int = Query(1),
        dv: int = Query(0),
        dman: int | None = Query(None),
        eqStart: str = Query("copy"),
        eqRest: str = Query("copy"),
    ):
        session = store.get(session_id)
        params = _class_params(dh, dv, dman, eqStart, eqRest)
        report = build_classes_report(session.analysis, params)
        with session.lock:
            session.last_class_params = params
        return report

    @app.get("/sessions/{session_id}/sinks")
    def get_sinks(session_id: str):
        session = store.get(session_id)
        return _curation_report(session)

    @app.post("/sessions/{session_id}/sinks/exclude")
    def post_exclude(session_id: str, body: dict):
        session = store.get(session_id)
        cell = _cell_from_body(body)
        with session.lock:
            cur = _ensure_curation(session)
            session.curation = exclude_sink(cur, session.analysis.ddg, cell)
        return _curation_report(session)

    @app.post("/sessions/{session_id}/sinks/restore")
    def post_restore(session_id: str, body: dict):
        session = store.get(session_id)
        cell = _cell_from_body(body)
        with session.lock:
            cur = _ensure_curation(session)
            session.curation = restore_sink(cur, session.analysis.ddg, cell)
        return _curation_report(session)

    @app.get("/sessions/{session_id}/modules")
    def get_modules(session_id: str):
        session = store.get(session_id)
        return build_modules_report(session.analysis, _curation(session))

    @app.get("/sessions/{session_id}/srg")
    def get_srg(
        session_id: str,
        mode: str = Query(...),
        fisheye: str | None = Query(None),
        format: str = Query("json"),
    ):
        session = store.get(session_id)
        if format not in ("json", "dot"):
            from gridaudit.errors import InvalidParams

            raise InvalidParams(f"unknown srg format {format!r}")
        class_params = session.last_class_params
        if format == "dot":
            graph = build_srg(
                session.analysis, _curation(session), mode, fisheye, class_params
            )
            return PlainTextResponse(
                srg_to_dot(graph, style="audit"), media_type="text/vnd.graphviz"
            )
        return build_srg_report(
            session.analysis, _curation(session), mode, fisheye, class_params
        )

    @app.get("/sessions/{session_id}/trace")
    def get_trace(session_id: str, module: str = Query(...)):
        session = store.get(session_id)
        return build_trace_report(session.analysis, _curation(session), module)

    @app.get("/sessions/{session_id}/diff")
    def get_diff(session_id: str, fine: str = Query(...), coarse: str = Query(...)):
        session = store.get(session_id)
        return build_diff_report(
            session.analysis, level_from_name(fine), level_from_name(coarse)
        )

    return app


def _cell_from_body(body: dict) -> CellAddr:
    from gridaudit.errors import InvalidParams

    if not isinstance(body, dict) or not isinstance(body.get("cell"), str):
        raise InvalidParams("body must be a JSON object with a 'cell' string")
    return CellAddr(*parse_a1(body["cell"]))
