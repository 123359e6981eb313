"""HTTP service over sessions, ingestion, alerts, reports, and the outbox.

Every mutation flows through the session runtime, whose append-then-notify
contract means an event is on disk before any stream subscriber sees it.
Error responses all share one envelope: {"error": {code, message, detail}}.
"""

from __future__ import annotations

import json
import threading
from dataclasses import asdict
from pathlib import Path
from typing import Iterator
from urllib import request as urllib_request

from fastapi import Body, FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from ..errors import (
    ConsentViolationError,
    CounselkitError,
    DuplicateSessionError,
    EmptyTranscriptError,
    GeneratorUnavailableError,
    InputOutOfOrderError,
    SessionClosedError,
)
from ..followup import Outbox
from ..fusion import EmotionDistribution
from ..ppg.types import HrvFeatures, ReactivitySample
from ..reporting import TranscriptTurn, generate_report
from ..session import (
    SessionConfig,
    SessionRuntime,
    SessionStore,
    alerts_from_log,
    create_session,
    read_log,
    updates_from_log,
)
from .config import GatewayConfig

ERROR_STATUS = {
    "bad_request": 400,
    "not_found": 404,
    "conflict": 409,
    "consent_violation": 403,
    "closed": 409,
}


class ApiException(Exception):
    def __init__(self, code: str, message: str, detail: str | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.detail = detail

    def response(self) -> JSONResponse:
        return JSONResponse(
            status_code=ERROR_STATUS[self.code],
            content={
                "error": {
                    "code": self.code,
                    "message": self.message,
                    "detail": self.detail,
                }
            },
        )


class HttpTextGenerator:
    """Minimal client for an optional external completion endpoint."""

    kind = "http"

    def __init__(self, url: str, model: str | None, timeout_s: float):
        self.url = url
        self.model = model
        self.timeout_s = timeout_s

    def generate(self, prompt: str) -> str:
        body = json.dumps({"model": self.model, "prompt": prompt}).encode("utf-8")
        req = urllib_request.Request(
            self.url, data=body, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib_request.urlopen(req, timeout=self.timeout_s) as resp:
                doc = json.loads(resp.read().decode("utf-8"))
        except Exception as exc:
            raise GeneratorUnavailableError(str(exc)) from exc
        text = doc.get("text")
        if not isinstance(text, str):
            raise GeneratorUnavailableError("endpoint response had no text field")
        return text


def make_generator(config: GatewayConfig):
    if not config.generator_url:
        return None
    return HttpTextGenerator(
        config.generator_url, config.generator_model, config.generator_timeout_s
    )


def _parse(payload: dict, key: str, parser, required: bool = False):
    value = payload.get(key)
    if value is None:
        if required:
            raise ApiException("bad_request", f"missing field {key!r}")
        return None
    try:
        return parser(value)
    except (CounselkitError, ValueError, KeyError, TypeError) as exc:
        raise ApiException("bad_request", f"invalid field {key!r}", str(exc))


def create_app(config: GatewayConfig | None = None) -> FastAPI:
    config = config or GatewayConfig()
    app = FastAPI(title="counselkit gateway", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.store = SessionStore(config.store_root)
    app.state.sessions = {}
    app.state.sessions_lock = threading.Lock()
    app.state.outbox = Outbox()

    store: SessionStore = app.state.store

    @app.exception_handler(ApiException)
    async def on_api_error(request: Request, exc: ApiException):
        return exc.response()

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return ApiException("bad_request", "invalid request body", str(exc)).response()

    def get_runtime(session_id: str) -> SessionRuntime:
        with app.state.sessions_lock:
            runtime = app.state.sessions.get(session_id)
        if runtime is None:
            raise ApiException("not_found", f"no session {session_id!r}")
        return runtime

    def logged_events(session_id: str):
        """Events for a live or previously recorded session."""
        with app.state.sessions_lock:
            runtime = app.state.sessions.get(session_id)
        if runtime is not None:
            return runtime.events_since(0)
        if store.events_path(session_id).exists():
            return read_log(store.events_path(session_id))
        raise ApiException("not_found", f"no session {session_id!r}")

    # -- sessions ------------------------------------------------------------

    @app.post("/sessions", status_code=201)
    def post_session(payload: dict = Body(...)):
        doc = dict(payload)
        doc.setdefault("fusion", asdict(config.fusion))
        try:
            session_config = SessionConfig.from_dict(doc)
        except (KeyError, TypeError, ValueError) as exc:
            raise ApiException("bad_request", "invalid session config", str(exc))
        try:
            runtime = create_session(
                session_config, store, start_t_ms=int(doc.get("start_t_ms", 0))
            )
        except ConsentViolationError as exc:
            raise ApiException("consent_violation", str(exc))
        except DuplicateSessionError as exc:
            raise ApiException("conflict", str(exc))
        with app.state.sessions_lock:
            app.state.sessions[session_config.session_id] = runtime
        return {"session": session_config.to_dict(), "last_seq": 1}

    @app.post("/sessions/{session_id}/end")
    def post_end(session_id: str, payload: dict = Body(default={})):
        runtime = get_runtime(session_id)
        end_t_ms = _parse(payload, "end_t_ms", int)
        try:
            summary = runtime.end_session(end_t_ms=end_t_ms)
        except SessionClosedError as exc:
            raise ApiException("closed", str(exc))
        return {"summary": summary}

    # -- ingestion -------------------------------------------------------------

    def ingest_errors(fn):
        try:
            return fn()
        except SessionClosedError as exc:
            raise ApiException("closed", str(exc))
        except ConsentViolationError as exc:
            raise ApiException("consent_violation", str(exc))
        except (InputOutOfOrderError, ValueError) as exc:
            raise ApiException("bad_request", str(exc))

    @app.post("/sessions/{session_id}/ppg")
    def post_ppg(session_id: str, payload: dict = Body(...)):
        runtime = get_runtime(session_id)
        t_ms = _parse(payload, "t_ms", int, required=True)
        hrv = _parse(payload, "hrv", lambda d: HrvFeatures(**d))
        reactivity = _parse(payload, "reactivity", ReactivitySample.from_dict)
        dist = _parse(payload, "dist", EmotionDistribution.from_sequence)
        events = ingest_errors(
            lambda: runtime.ingest_ppg(t_ms, hrv=hrv, reactivity=reactivity, dist=dist)
        )
        return {"events": [e.to_record() for e in events], "last_seq": events[-1].seq}

    @app.post("/sessions/{session_id}/speech")
    def post_speech(session_id: str, payload: dict = Body(...)):
        runtime = get_runtime(session_id)
        t_ms = _parse(payload, "t_ms", int, required=True)
        dist = _parse(payload, "dist", EmotionDistribution.from_sequence, required=True)
        quality = payload.get("quality", "low")
        events = ingest_errors(lambda: runtime.ingest_speech(t_ms, dist, quality))
        return {"events": [e.to_record() for e in events], "last_seq": events[-1].seq}

    # -- reads -----------------------------------------------------------------

    @app.get("/sessions/{session_id}/updates")
    def get_updates(session_id: str, since_seq: int = Query(default=0)):
        events = logged_events(session_id)
        return {
            "updates": [
                e.to_record()
                for e in events
                if e.kind == "emotion_update" and e.seq > since_seq
            ],
            "last_seq": events[-1].seq if events else 0,
        }

    @app.get("/sessions/{session_id}/alerts")
    def get_alerts(session_id: str):
        events = logged_events(session_id)
        return {"alerts": [a.to_wire() for a in alerts_from_log(events)]}

    @app.post("/sessions/{session_id}/alerts/{alert_id}/ack")
    def post_ack(session_id: str, alert_id: str):
        runtime = get_runtime(session_id)
        try:
            runtime.ack_alert(alert_id)
        except KeyError:
            raise ApiException("not_found", f"no alert {alert_id!r}")
        except SessionClosedError as exc:
            raise ApiException("closed", str(exc))
        alert = next(a for a in runtime.alerts() if a.alert_id == alert_id)
        return {"alert": alert.to_wire()}

    @app.get("/sessions/{session_id}/stream")
    def get_stream(request: Request, session_id: str):
        last_seq = int(request.headers.get("last-seq", 0))
        with app.state.sessions_lock:
            runtime = app.state.sessions.get(session_id)

        if runtime is not None:
            def live() -> Iterator[str]:
                for event in runtime.subscribe(since_seq=last_seq):
                    yield event.to_line()
            return StreamingResponse(live(), media_type="application/x-ndjson")

        events = logged_events(session_id)

        def recorded() -> Iterator[str]:
            for event in events:
                if event.seq > last_seq:
                    yield event.to_line()
        return StreamingResponse(recorded(), media_type="application/x-ndjson")

    # -- reports ----------------------------------------------------------------

    @app.post("/sessions/{session_id}/report")
    def post_report(session_id: str, payload: dict = Body(...)):
        with app.state.sessions_lock:
            runtime = app.state.sessions.get(session_id)
        if runtime is not None and not runtime.closed:
            raise ApiException(
                "conflict", f"session {session_id!r} is still open"
            )
        events = logged_events(session_id)
        try:
            summary = store.read_summary(session_id)
        except FileNotFoundError:
            raise ApiException(
                "conflict", f"session {session_id!r} has no summary yet"
            )
        turns_doc = payload.get("transcript")
        if not isinstance(turns_doc, list):
            raise ApiException("bad_request", "transcript must be a list of turns")
        try:
            transcript = [TranscriptTurn.from_dict(d) for d in turns_doc]
        except (KeyError, TypeError, ValueError) as exc:
            raise ApiException("bad_request", "invalid transcript turn", str(exc))
        prior_summary = payload.get("prior_summary")
        try:
            report = generate_report(
                transcript,
                summary,
                generator=make_generator(config),
                prior_summary=prior_summary,
                updates=updates_from_log(events),
            )
        except EmptyTranscriptError as exc:
            raise ApiException("bad_request", str(exc))
        return {"report": report.to_dict(), "markdown": report.to_markdown()}

    # -- follow-up outbox ----------------------------------------------------------

    @app.get("/clients/{pseudonym}/outbox")
    def get_outbox(pseudonym: str):
        messages = app.state.outbox.poll(pseudonym)
        return {"messages": [m.to_dict() for m in messages]}

    if config.dashboard_dir and Path(config.dashboard_dir).is_dir():
        app.mount(
            "/",
            StaticFiles(directory=config.dashboard_dir, html=True),
            name="dashboard",
        )

    return app


def serve(config: GatewayConfig) -> None:
    """Run the gateway until interrupted. Loopback-only unless overridden."""
    import uvicorn

    config.require_bindable()
    uvicorn.run(create_app(config), host=config.host, port=config.port,
                log_level="warning")
