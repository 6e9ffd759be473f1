"""HTTP service hosting live sequential inspection sessions.

Each session is an append-only newline-delimited JSON journal on disk;
the in-memory state is always a pure function of (config, journal), so a
killed and restarted service rebuilds every session exactly by replay.
Undo appends an undo record rather than rewriting the journal. Binds
loopback by default; this is a single-inspector desk tool, not a fleet
service.
"""

from __future__ import annotations

import json
import math
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .plans import InvalidParameterError
from .sprt import ItemResult, SprtConfig, SprtState, step

_CONFIG_FIELDS = ("p0", "p1", "alpha", "beta", "n_max", "k_star")


def _error(status: int, message: str, field_name: str | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"error": {"field": field_name, "message": message}},
    )


@dataclass
class Session:
    """One live inspection: config plus the effective event list."""

    id: str
    config: SprtConfig
    created_at: float
    events: list[dict] = field(default_factory=list)  # {"result": ..., "ts": ...}
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def replay(self) -> SprtState:
        state = SprtState()
        for event in self.events:
            step(state, self.config, ItemResult(event["result"]))
        return state

    def trajectory(self) -> list[float]:
        """log_lr after each recorded event, for plotting."""
        state = SprtState()
        points: list[float] = []
        for event in self.events:
            step(state, self.config, ItemResult(event["result"]))
            points.append(state.log_lr)
        return points


class SessionStore:
    """Journal-backed session registry; sessions load lazily after restart."""

    def __init__(self, data_dir: Path):
        self.data_dir = data_dir
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, Session] = {}
        self._registry_lock = threading.Lock()

    def _journal_path(self, session_id: str) -> Path:
        return self.data_dir / f"{session_id}.ndjson"

    def _append(self, session_id: str, record: dict) -> None:
        # Response is only sent after the record is on disk.
        with open(self._journal_path(session_id), "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def create(self, config: SprtConfig) -> Session:
        session = Session(id=uuid.uuid4().hex, config=config, created_at=time.time())
        with self._registry_lock:
            self._sessions[session.id] = session
        self._append(
            session.id,
            {
                "type": "created",
                "id": session.id,
                "created_at": session.created_at,
                "config": config.to_json_dict(),
            },
        )
        return session

    def get(self, session_id: str) -> Session | None:
        with self._registry_lock:
            session = self._sessions.get(session_id)
            if session is not None:
                return session
        session = self._load(session_id)
        if session is not None:
            with self._registry_lock:
                # Another thread may have loaded it meanwhile; keep the first.
                session = self._sessions.setdefault(session_id, session)
        return session

    def _load(self, session_id: str) -> Session | None:
        path = self._journal_path(session_id)
        if not path.is_file():
            return None
        session: Session | None = None
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            if record["type"] == "created":
                session = Session(
                    id=record["id"],
                    config=SprtConfig(**record["config"]),
                    created_at=record["created_at"],
                )
            elif record["type"] == "result" and session is not None:
                session.events.append({"result": record["result"], "ts": record["ts"]})
            elif record["type"] == "undo" and session is not None:
                session.events.pop()
        return session

    def record(self, session: Session, result: ItemResult) -> SprtState:
        event = {"result": result.value, "ts": time.time()}
        session.events.append(event)
        self._append(session.id, {"type": "result", **event})
        return session.replay()

    def undo(self, session: Session) -> SprtState:
        session.events.pop()
        self._append(session.id, {"type": "undo", "ts": time.time()})
        return session.replay()


def _validate_config(payload: dict) -> SprtConfig:
    if not isinstance(payload, dict):
        raise InvalidParameterError("body must be a JSON object")
    for name in _CONFIG_FIELDS:
        if name not in payload:
            raise InvalidParameterError(f"{name} is required", field=name)
        value = payload[name]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InvalidParameterError(f"{name} must be a number", field=name)
    return SprtConfig(
        p0=float(payload["p0"]),
        p1=float(payload["p1"]),
        alpha=float(payload["alpha"]),
        beta=float(payload["beta"]),
        n_max=int(payload["n_max"]),
        k_star=int(payload["k_star"]),
    )


def _state_body(session: Session, state: SprtState) -> dict:
    return {
        **state.to_record(),
        "likelihood_ratio": _safe_exp(state.log_lr),
        "log_a": session.config.log_a,
        "log_b": session.config.log_b,
    }


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:  # pragma: no cover - needs log_lr > 709
        return float("inf")


def create_app(data_dir: Path, static_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="lotsampler session service")
    store = SessionStore(data_dir)
    app.state.store = store

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return _error(400, "invalid JSON body")
        try:
            config = _validate_config(payload)
        except InvalidParameterError as exc:
            return _error(400, str(exc), exc.field)
        session = store.create(config)
        return JSONResponse(
            status_code=201,
            content={
                "id": session.id,
                "created_at": session.created_at,
                "config": session.config.to_json_dict(),
                "state": SprtState().to_record(),
                "log_a": session.config.log_a,
                "log_b": session.config.log_b,
            },
        )

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session", "id")
        with session.lock:
            state = session.replay()
            return {
                "id": session.id,
                "created_at": session.created_at,
                "config": session.config.to_json_dict(),
                "state": state.to_record(),
                "events": [dict(e) for e in session.events],
                "trajectory": session.trajectory(),
                "log_a": session.config.log_a,
                "log_b": session.config.log_b,
            }

    @app.post("/sessions/{session_id}/results")
    async def record_result(session_id: str, request: Request):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session", "id")
        try:
            payload = await request.json()
        except Exception:
            return _error(400, "invalid JSON body")
        token = payload.get("result") if isinstance(payload, dict) else None
        if token not in ("pass", "defect"):
            return _error(400, "result must be \"pass\" or \"defect\"", "result")
        with session.lock:
            if session.replay().verdict.decided:
                return _error(409, "session already decided")
            state = store.record(session, ItemResult(token))
            return _state_body(session, state)

    @app.post("/sessions/{session_id}/undo")
    async def undo_last(session_id: str):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session", "id")
        with session.lock:
            if not session.events:
                return _error(409, "nothing to undo")
            state = store.undo(session)
            return _state_body(session, state)

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="console")

    return app
