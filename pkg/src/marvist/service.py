"""Session-based HTTP facade over the engine.

Each session owns one engine behind a lock, so commands within a session
apply strictly in arrival order; snapshot reads serve the last committed
state. Bodies are JSON; engine errors surface as 422 with their code.
"""
from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from . import errors as err
from .commands import run_line
from .engine import Engine
from .persistence import (
    export_document,
    report_to_document,
    scene_to_document,
)

BIND_ENV = "MARVIST_BIND"


@dataclass
class Session:
    id: str
    engine: Engine = field(default_factory=Engine)
    lock: threading.Lock = field(default_factory=threading.Lock)
    seq: int = 0


def create_app() -> FastAPI:
    app = FastAPI(title="marvist session service")
    sessions: dict[str, Session] = {}
    app.state.sessions = sessions

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise err.NotFound(f"session {session_id}")
        return session

    @app.exception_handler(err.EngineError)
    async def engine_error(request: Request, exc: err.EngineError):
        status = 404 if isinstance(exc, err.NotFound) else 422
        return JSONResponse(status_code=status,
                            content={"error": exc.code, "message": str(exc)})

    @app.post("/sessions", status_code=201)
    def create_session():
        session = Session(uuid.uuid4().hex)
        sessions[session.id] = session
        return {"id": session.id}

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        get_session(session_id)
        del sessions[session_id]
        return Response(status_code=204)

    @app.post("/sessions/{session_id}/commands")
    async def post_command(session_id: str, request: Request):
        session = get_session(session_id)
        body = await request.json()
        command = body.get("command")
        if not isinstance(command, str) or not command.strip():
            raise err.BadArguments("body must carry a non-empty 'command' string")
        with session.lock:
            expected = session.seq + 1
            token = body.get("seq")
            if token is not None and token != expected:
                return JSONResponse(
                    status_code=409,
                    content={"error": "OrderingConflict",
                             "message": f"expected seq {expected}, got {token}"})
            outcome = run_line(session.engine, command)
            session.seq = expected
            report = session.engine.last_report
            return {
                "ok": True,
                "seq": session.seq,
                "command": outcome.command,
                "data": outcome.data,
                "lines": outcome.lines,
                "warnings": outcome.warnings,
                "report": report_to_document(outcome.report) if outcome.report else None,
                "last_report": report_to_document(report) if report else None,
            }

    @app.get("/sessions/{session_id}/scene")
    def get_scene(session_id: str):
        session = get_session(session_id)
        return scene_to_document(session.engine.snapshot())

    @app.get("/sessions/{session_id}/export")
    def get_export(session_id: str):
        session = get_session(session_id)
        return export_document(session.engine.snapshot())

    @app.get("/sessions/{session_id}/validation")
    def get_validation(session_id: str):
        session = get_session(session_id)
        report = session.engine.last_report
        return report_to_document(report) if report else None

    @app.get("/sessions/{session_id}/ranked")
    def get_ranked(session_id: str, attr: str):
        session = get_session(session_id)
        with session.lock:
            ranked = session.engine.ranked(attr)
            recommended = session.engine.recommend(attr)
        return {
            "attribute": attr,
            "channels": [
                {"channel": e.channel.value, "valid": e.valid, "reasons": list(e.reasons)}
                for e in ranked
            ],
            "recommended": recommended.channel.value,
        }

    @app.post("/sessions/{session_id}/undo")
    def post_undo(session_id: str):
        session = get_session(session_id)
        with session.lock:
            session.engine.undo()
            session.seq += 1
        return {"ok": True, "seq": session.seq}

    @app.post("/sessions/{session_id}/redo")
    def post_redo(session_id: str):
        session = get_session(session_id)
        with session.lock:
            session.engine.redo()
            session.seq += 1
        return {"ok": True, "seq": session.seq}

    return app
