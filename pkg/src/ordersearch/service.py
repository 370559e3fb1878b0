"""HTTP session service for human-in-the-loop pairwise search.

Each session drives one square search, one comparison at a time: the client
fetches the pending A/B question, a person answers which option they prefer
(or "tie"), and the service advances the search and persists before
acknowledging. Points map to drink recipes (citric acid / sugar mass
fractions) so the question can be served as an actual taste test.

Orientation: the human is asked which option is BETTER, and the search
minimizes the negated preference internally, so answer "A" means the first
probe has the smaller internal objective value.

Persistence is one JSON document per session, written atomically
(temp file + rename). Restarts rebuild every session by replaying its
recorded answers and verifying the replay reproduces the stored questions
and region history exactly; files that fail are skipped with a warning.
"""

from __future__ import annotations

import json
import logging
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from fastapi import Body, FastAPI, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .core import Point2, Preference, Rect
from .square_search import (
    SquareState,
    Transcript,
    replay_answers,
    square_advance,
    square_init,
    square_question,
)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

RECIPE_DOMAIN = Rect.from_bounds(1.0, 4.0, 1.0, 4.0)

_WIRE_TO_PREFERENCE = {"A": Preference.FIRST, "B": Preference.SECOND, "tie": Preference.TIE}
_PREFERENCE_TO_WIRE = {v: k for k, v in _WIRE_TO_PREFERENCE.items()}


@dataclass(frozen=True)
class Recipe:
    """Drink composition, in mass-fraction percent."""

    citric_acid_pct: float
    sugar_pct: float


def point_to_recipe(p: Point2) -> Recipe:
    """Log-scale map from search coordinates to drink composition:
    citric acid 0.05% * 3^x, sugar 2% * 2^y, defined on [1,4] x [1,4]."""
    if not RECIPE_DOMAIN.contains(p):
        raise ValueError(f"point ({p.x}, {p.y}) is outside the recipe domain [1,4]x[1,4]")
    return Recipe(citric_acid_pct=0.05 * 3.0**p.x, sugar_pct=2.0 * 2.0**p.y)


@dataclass(frozen=True)
class SessionConfig:
    domain: Rect = RECIPE_DOMAIN
    k_total: int = 2
    n_inner: int = 5
    tie_stop: bool = True
    label_mode: str = "recipe"  # "recipe" or "raw"

    def validate(self) -> None:
        if self.k_total < 1:
            raise ValueError(f"k_total must be >= 1, got {self.k_total}")
        if self.n_inner < 1:
            raise ValueError(f"n_inner must be >= 1, got {self.n_inner}")
        if not self.domain.is_square:
            raise ValueError("domain must be a square")
        if self.label_mode not in ("recipe", "raw"):
            raise ValueError(f"label_mode must be 'recipe' or 'raw', got {self.label_mode!r}")
        if self.label_mode == "recipe":
            for corner in (
                Point2(self.domain.x_min, self.domain.y_min),
                Point2(self.domain.x_max, self.domain.y_max),
            ):
                if not RECIPE_DOMAIN.contains(corner):
                    raise ValueError(
                        "label_mode 'recipe' needs the domain inside [1,4]x[1,4]; "
                        "use label_mode 'raw' for other domains"
                    )


@dataclass(frozen=True)
class AnswerRecord:
    token: str
    preference: str  # wire vocabulary: "A" | "B" | "tie"
    option_a: Point2
    option_b: Point2
    answered_at: str


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class Session:
    """One in-flight search plus its answer log. Mutations are serialized by
    the session lock; reads outside the lock only touch persisted states."""

    def __init__(self, session_id: str, config: SessionConfig, created_at: str | None = None):
        config.validate()
        self.id = session_id
        self.config = config
        self.created_at = created_at or _now()
        self.updated_at = self.created_at
        self.answers: list[AnswerRecord] = []
        self.state: SquareState = square_init(config.domain, config.k_total, config.n_inner)
        self.lock = threading.Lock()

    @property
    def finished(self) -> bool:
        return self.state.finished

    @property
    def status(self) -> str:
        return "complete" if self.finished else "active"

    def token(self) -> str:
        """Deterministic question token: the index of the next answer. A
        restart re-derives the same token, so clients can resume blindly."""
        return f"q{len(self.answers)}"

    def question(self) -> tuple[Point2, Point2]:
        return square_question(self.state)

    def transcript(self) -> Transcript:
        _, transcript = replay_answers(
            self.config.domain,
            self.config.k_total,
            self.config.n_inner,
            [_WIRE_TO_PREFERENCE[a.preference] for a in self.answers],
        )
        return transcript


# ---------------------------------------------------------------------------
# Persistence


def _rect_to_json(r: Rect) -> dict[str, Any]:
    return {
        "center": [r.center.x, r.center.y],
        "half_width": r.half_width,
        "half_height": r.half_height,
    }


def _rect_from_json(d: dict[str, Any]) -> Rect:
    cx, cy = d["center"]
    return Rect(Point2(float(cx), float(cy)), float(d["half_width"]), float(d["half_height"]))


def session_to_json(session: Session) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "id": session.id,
        "created_at": session.created_at,
        "updated_at": session.updated_at,
        "status": session.status,
        "config": {
            "domain": _rect_to_json(session.config.domain),
            "k_total": session.config.k_total,
            "n_inner": session.config.n_inner,
            "tie_stop": session.config.tie_stop,
            "label_mode": session.config.label_mode,
        },
        "answers": [
            {
                "token": a.token,
                "preference": a.preference,
                "option_a": [a.option_a.x, a.option_a.y],
                "option_b": [a.option_b.x, a.option_b.y],
                "answered_at": a.answered_at,
            }
            for a in session.answers
        ],
        "history": [
            {**_rect_to_json(rect), "phase": phase.value}
            for rect, phase in session.state.history
        ],
    }


def session_from_json(doc: dict[str, Any]) -> Session:
    """Rebuild a session by replaying its answers; raises ValueError when the
    replay does not reproduce the recorded questions and history exactly."""
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    cfg = doc["config"]
    config = SessionConfig(
        domain=_rect_from_json(cfg["domain"]),
        k_total=int(cfg["k_total"]),
        n_inner=int(cfg["n_inner"]),
        tie_stop=bool(cfg["tie_stop"]),
        label_mode=str(cfg["label_mode"]),
    )
    session = Session(doc["id"], config, created_at=doc.get("created_at"))
    session.updated_at = doc.get("updated_at", session.created_at)

    answers = [
        AnswerRecord(
            token=str(a["token"]),
            preference=str(a["preference"]),
            option_a=Point2(float(a["option_a"][0]), float(a["option_a"][1])),
            option_b=Point2(float(a["option_b"][0]), float(a["option_b"][1])),
            answered_at=str(a["answered_at"]),
        )
        for a in doc["answers"]
    ]
    for record in answers:
        if record.preference not in _WIRE_TO_PREFERENCE:
            raise ValueError(f"unknown preference {record.preference!r}")
        if record.token != session.token():
            raise ValueError(f"token sequence broken at {record.token!r}")
        asked = session.question()
        if asked != (record.option_a, record.option_b):
            raise ValueError(f"recorded question {record.token!r} does not match replay")
        session.state = square_advance(session.state, _WIRE_TO_PREFERENCE[record.preference])
        session.answers.append(record)

    stored_history = [
        (_rect_from_json(h), str(h["phase"])) for h in doc.get("history", [])
    ]
    replayed_history = [(rect, phase.value) for rect, phase in session.state.history]
    if stored_history != replayed_history:
        raise ValueError("stored region history does not match replay")
    return session


class SessionStore:
    """Directory of one-JSON-per-session files with atomic writes."""

    def __init__(self, state_dir: str | Path):
        self.state_dir = Path(state_dir)
        self.state_dir.mkdir(parents=True, exist_ok=True)

    def path_for(self, session_id: str) -> Path:
        return self.state_dir / f"{session_id}.json"

    def save(self, session: Session) -> None:
        path = self.path_for(session.id)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(
            json.dumps(session_to_json(session), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        tmp.replace(path)

    def load_all(self) -> dict[str, Session]:
        sessions: dict[str, Session] = {}
        for path in sorted(self.state_dir.glob("*.json")):
            try:
                doc = json.loads(path.read_text(encoding="utf-8"))
                session = session_from_json(doc)
            except (OSError, ValueError, KeyError, IndexError, TypeError) as exc:
                logger.warning("skipping malformed session file %s: %s", path, exc)
                continue
            sessions[session.id] = session
        return sessions


def load_sessions(state_dir: str | Path) -> dict[str, Session]:
    """Restore every well-formed session file under state_dir."""
    return SessionStore(state_dir).load_all()


# ---------------------------------------------------------------------------
# HTTP layer


def _error(status: int, code: str, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"error": message, "code": code})


def _option_json(p: Point2, config: SessionConfig) -> dict[str, Any]:
    out: dict[str, Any] = {"point": [p.x, p.y]}
    if config.label_mode == "recipe":
        recipe = point_to_recipe(p)
        out["recipe"] = {
            "citric_acid_pct": recipe.citric_acid_pct,
            "sugar_pct": recipe.sugar_pct,
        }
    return out


def _progress_json(session: Session) -> dict[str, Any]:
    state = session.state
    return {
        "comparisons": state.comparisons,
        "iteration": state.iteration,
        "k_total": state.k_total,
        "n_inner": state.n_inner,
        "phase": None if state.finished else state.phase.value,
        "status": session.status,
    }


def _final_json(session: Session) -> dict[str, Any]:
    return _option_json(session.state.region.center, session.config)


def _summary_json(session: Session) -> dict[str, Any]:
    out = {
        "id": session.id,
        "status": session.status,
        "region": _rect_to_json(session.state.region),
        "progress": _progress_json(session),
    }
    if session.finished:
        out["final"] = _final_json(session)
    return out


def _parse_config(body: dict[str, Any] | None) -> SessionConfig:
    body = body or {}
    if not isinstance(body, dict):
        raise _error(400, "invalid_config", "request body must be a JSON object")
    allowed = {"domain", "k_total", "n_inner", "tie_stop", "label_mode"}
    unknown = set(body) - allowed
    if unknown:
        raise _error(400, "invalid_config", f"unknown config fields: {sorted(unknown)}")
    kwargs: dict[str, Any] = {}
    try:
        if "domain" in body and body["domain"] is not None:
            d = body["domain"]
            if {"x_min", "x_max", "y_min", "y_max"} <= set(d):
                kwargs["domain"] = Rect.from_bounds(
                    float(d["x_min"]), float(d["x_max"]), float(d["y_min"]), float(d["y_max"])
                )
            else:
                kwargs["domain"] = _rect_from_json(d)
        if "k_total" in body:
            kwargs["k_total"] = int(body["k_total"])
        if "n_inner" in body:
            kwargs["n_inner"] = int(body["n_inner"])
        if "tie_stop" in body:
            kwargs["tie_stop"] = bool(body["tie_stop"])
        if "label_mode" in body:
            kwargs["label_mode"] = str(body["label_mode"])
        config = SessionConfig(**kwargs)
        config.validate()
    except (ValueError, TypeError, KeyError) as exc:
        raise _error(400, "invalid_config", str(exc)) from None
    return config


def create_app(state_dir: str | Path) -> FastAPI:
    """Build the service around a state directory, restoring any sessions
    already persisted there."""
    store = SessionStore(state_dir)
    sessions = store.load_all()
    registry_lock = threading.Lock()

    app = FastAPI(title="ordersearch sessions")
    # The browser client is served as a static page, usually from a different
    # local origin than the API; answers carry no credentials, so a permissive
    # policy is safe here.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store
    app.state.sessions = sessions

    @app.exception_handler(HTTPException)
    async def _on_http_error(request, exc: HTTPException):
        detail = exc.detail
        if not isinstance(detail, dict) or "error" not in detail:
            detail = {"error": str(detail), "code": "error"}
        return JSONResponse(status_code=exc.status_code, content=detail)

    @app.exception_handler(RequestValidationError)
    async def _on_validation_error(request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"error": str(exc), "code": "invalid_request"}
        )

    def get_session(session_id: str) -> Session:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise _error(404, "unknown_session", f"no session {session_id!r}")
        return session

    @app.post("/sessions")
    def create_session(body: dict[str, Any] | None = Body(None)) -> dict[str, Any]:
        config = _parse_config(body)
        with registry_lock:
            session_id = uuid.uuid4().hex[:12]
            while session_id in sessions:
                session_id = uuid.uuid4().hex[:12]
            session = Session(session_id, config)
            store.save(session)
            sessions[session_id] = session
        return {"id": session_id}

    @app.get("/sessions")
    def list_sessions() -> list[dict[str, Any]]:
        with registry_lock:
            current = list(sessions.values())
        current.sort(key=lambda s: (s.created_at, s.id))
        return [
            {
                "id": s.id,
                "status": s.status,
                "comparisons": s.state.comparisons,
                "created_at": s.created_at,
            }
            for s in current
        ]

    @app.get("/sessions/{session_id}/question")
    def get_question(session_id: str) -> dict[str, Any]:
        session = get_session(session_id)
        with session.lock:
            if session.finished:
                return {
                    "status": "complete",
                    "final": _final_json(session),
                    "progress": _progress_json(session),
                }
            first, second = session.question()
            return {
                "token": session.token(),
                "option_a": _option_json(first, session.config),
                "option_b": _option_json(second, session.config),
                "progress": _progress_json(session),
            }

    @app.post("/sessions/{session_id}/answer")
    def post_answer(session_id: str, body: dict[str, Any] = Body(...)) -> dict[str, Any]:
        session = get_session(session_id)
        token = body.get("token")
        preference = body.get("preference")
        if not isinstance(token, str) or preference not in _WIRE_TO_PREFERENCE:
            raise _error(
                400,
                "invalid_answer",
                "body must be {token: string, preference: 'A' | 'B' | 'tie'}",
            )
        if preference == "tie" and not session.config.tie_stop:
            raise _error(400, "tie_disabled", "this session was created with tie_stop=false")
        with session.lock:
            if session.finished:
                raise _error(409, "session_complete", "session finished; no pending question")
            if token != session.token():
                raise _error(
                    409,
                    "stale_token",
                    f"expected token {session.token()!r}; fetch the current question",
                )
            first, second = session.question()
            new_state = square_advance(session.state, _WIRE_TO_PREFERENCE[preference])
            record = AnswerRecord(
                token=token,
                preference=preference,
                option_a=first,
                option_b=second,
                answered_at=_now(),
            )
            # Persist the prospective state first: acknowledge only what is
            # already on disk.
            old_state, old_updated = session.state, session.updated_at
            session.state = new_state
            session.answers.append(record)
            session.updated_at = record.answered_at
            try:
                store.save(session)
            except Exception:
                session.state = old_state
                session.answers.pop()
                session.updated_at = old_updated
                raise
            return _summary_json(session)

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str) -> dict[str, Any]:
        session = get_session(session_id)
        with session.lock:
            transcript = session.transcript()
            answered = [
                {
                    "first": [c.first.x, c.first.y],
                    "second": [c.second.x, c.second.y],
                    "answer": _PREFERENCE_TO_WIRE[c.answer],
                    "phase": c.phase.value,
                    "iteration": c.iteration,
                }
                for c in transcript.comparisons
            ]
            out = {
                "id": session.id,
                "status": session.status,
                "created_at": session.created_at,
                "updated_at": session.updated_at,
                "config": session_to_json(session)["config"],
                "region": _rect_to_json(session.state.region),
                "history": [
                    {**_rect_to_json(rect), "phase": phase.value}
                    for rect, phase in session.state.history
                ],
                "segments": [
                    {
                        "p0": [seg.p0.x, seg.p0.y],
                        "p1": [seg.p1.x, seg.p1.y],
                        "phase": phase.value,
                    }
                    for seg, phase in transcript.segments
                ],
                "answered": answered,
                "ties": [a for a in answered if a["answer"] == "tie"],
                "comparisons": session.state.comparisons,
                "progress": _progress_json(session),
            }
            if session.finished:
                out["final"] = _final_json(session)
            return out

    return app
