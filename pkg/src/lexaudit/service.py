"""JSON-over-HTTP service backing the annotation console.

Sessions are event-sourced: every mutation appends to a per-session JSONL
journal before it is applied, and a restarted service replays the journals
to an identical state. Responses are deterministic given journal state.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import annotate
from .annotate import Candidate, JournalWriter, Session
from .audit import run_audit
from .config import Config
from .corpus import PROFILES, Corpus
from .errors import ValidationError
from .lexicon import Category, load_ava

__all__ = ["ServiceState", "create_app", "state_from_config"]


class ServiceState:
    """Everything the endpoints need: corpora, candidates, live sessions."""

    def __init__(
        self,
        candidates: list[Candidate] | None = None,
        corpora: dict[str, Corpus] | None = None,
        journal_dir: str | Path | None = None,
    ):
        self.candidates = candidates or []
        self.corpora = corpora or {}
        self.journal_dir = Path(journal_dir) if journal_dir else None
        self.sessions: dict[str, Session] = {}
        self.journals: dict[str, JournalWriter] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        if self.journal_dir is not None:
            self.journal_dir.mkdir(parents=True, exist_ok=True)
            self._replay_existing()

    def _replay_existing(self) -> None:
        for path in sorted(self.journal_dir.glob("*.jsonl")):
            events = annotate.read_journal(path)
            session = annotate.replay_session(events)
            self.sessions[session.id] = session
            self.journals[session.id] = JournalWriter(path)
            self._locks[session.id] = threading.Lock()

    def next_session_id(self) -> str:
        n = len(self.sessions) + 1
        while f"s{n}" in self.sessions:
            n += 1
        return f"s{n}"

    def register(self, session: Session) -> None:
        self.sessions[session.id] = session
        self._locks[session.id] = threading.Lock()
        if self.journal_dir is not None:
            writer = JournalWriter(self.journal_dir / f"{session.id}.jsonl")
            self.journals[session.id] = writer
            writer.append_all(session.history)

    def lock(self, session_id: str) -> threading.Lock:
        return self._locks[session_id]

    def journal(self, session_id: str) -> JournalWriter | None:
        return self.journals.get(session_id)


def state_from_config(config: Config) -> ServiceState:
    corpora = config.load_corpora()
    candidates: list[Candidate] = []
    if config.candidates_path:
        import json

        data = json.loads(Path(config.candidates_path).read_text(encoding="utf-8"))
        candidates = [Candidate.from_dict(c) for c in data]
    else:
        dictionary = config.load_dictionary()
        if dictionary is not None and corpora:
            profile = PROFILES[config.profile]
            ava = None
            if config.ava_path:
                ava = (load_ava(config.ava_path), config.ava_mode)
            matchsets = [
                run_audit(c, dictionary, profile, ava=ava, exclusions=config.exclusions)
                for c in corpora.values()
            ]
            candidates = annotate.extract_candidates(matchsets, corpora)
    return ServiceState(candidates, corpora, config.journal_dir)


class SessionBody(BaseModel):
    raters: list[str]
    candidates: list[dict] | None = None
    id: str | None = None


class RatingBody(BaseModel):
    rater: str
    term: str
    ambiguous: bool
    note: str | None = None


class ResolutionBody(BaseModel):
    term: str
    decision: bool
    note: str | None = None


def _error(status: int, message: str, fld: str | None = None) -> JSONResponse:
    return JSONResponse({"error": message, "field": fld}, status_code=status)


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="lexaudit annotation service")

    def get_session(session_id: str) -> Session | JSONResponse:
        session = state.sessions.get(session_id)
        if session is None:
            return _error(404, f"unknown session {session_id!r}", "session_id")
        return session

    @app.get("/candidates")
    def candidates():
        return [c.to_dict() for c in state.candidates]

    @app.get("/concordance")
    def concordance(term: str, corpus: str, window: int = 5):
        found = state.corpora.get(corpus)
        if found is None:
            return _error(404, f"unknown corpus {corpus!r}", "corpus")
        try:
            lines = annotate.concordance(
                found, term, window, category=Category.GENDERED_LANGUAGE
            )
        except ValidationError as exc:
            return _error(400, str(exc), "window")
        return {"term": term, "corpus": corpus, "lines": [l.to_dict() for l in lines]}

    @app.post("/sessions")
    def create_session(body: SessionBody):
        if body.candidates is not None:
            try:
                candidates = [Candidate.from_dict(c) for c in body.candidates]
            except (KeyError, ValueError) as exc:
                return _error(400, f"bad candidate record: {exc}", "candidates")
        else:
            candidates = state.candidates
        if not candidates:
            return _error(400, "no candidates available for a session", "candidates")
        with state._registry_lock:
            session_id = body.id or state.next_session_id()
            if session_id in state.sessions:
                return _error(400, f"session {session_id!r} already exists", "id")
            try:
                session = annotate.create_session(candidates, body.raters, session_id)
            except ValidationError as exc:
                return _error(400, str(exc), "raters")
            state.register(session)
        return session.to_dict()

    @app.get("/sessions/{session_id}")
    def show_session(session_id: str):
        session = get_session(session_id)
        if isinstance(session, JSONResponse):
            return session
        return session.to_dict()

    @app.get("/sessions/{session_id}/next")
    def next_term(session_id: str, rater: str):
        session = get_session(session_id)
        if isinstance(session, JSONResponse):
            return session
        try:
            term = session.next_term(rater)
        except ValidationError as exc:
            return _error(400, str(exc), "rater")
        if term is None:
            return {"term": None, "candidate": None}
        return {"term": term, "candidate": session.candidates[term].to_dict()}

    @app.post("/sessions/{session_id}/ratings")
    def post_rating(session_id: str, body: RatingBody):
        session = get_session(session_id)
        if isinstance(session, JSONResponse):
            return session
        if body.term not in session.candidates:
            return _error(404, f"unknown term {body.term!r}", "term")
        with state.lock(session_id):
            try:
                status = session.submit_rating(
                    body.rater, body.term, body.ambiguous, body.note
                )
            except ValidationError as exc:
                return _error(400, str(exc), "rater")
            journal = state.journal(session_id)
            if journal is not None:
                journal.append(session.history[-1])
        return {"term": body.term, "status": status.value}

    @app.post("/sessions/{session_id}/resolutions")
    def post_resolution(session_id: str, body: ResolutionBody):
        session = get_session(session_id)
        if isinstance(session, JSONResponse):
            return session
        if body.term not in session.candidates:
            return _error(404, f"unknown term {body.term!r}", "term")
        with state.lock(session_id):
            status = session.status(body.term)
            if status in (annotate.TermStatus.PENDING, annotate.TermStatus.RESOLVED):
                return _error(
                    409,
                    f"term {body.term!r} is {status.value}; resolution needs "
                    f"agreed or needs_discussion",
                    "term",
                )
            session.resolve(body.term, body.decision, body.note)
            journal = state.journal(session_id)
            if journal is not None:
                journal.append(session.history[-1])
        return {"term": body.term, "status": annotate.TermStatus.RESOLVED.value}

    @app.get("/sessions/{session_id}/alpha")
    def alpha(session_id: str):
        session = get_session(session_id)
        if isinstance(session, JSONResponse):
            return session
        try:
            overall = annotate.session_alpha(session)
        except ValidationError:
            overall = None
        return {"alpha": overall, "per_term": annotate.per_term_alpha(session)}

    @app.get("/sessions/{session_id}/export")
    def export(session_id: str):
        session = get_session(session_id)
        if isinstance(session, JSONResponse):
            return session
        try:
            payload = annotate.export_ava(session)
        except ValidationError as exc:
            return _error(400, str(exc), "term")
        return PlainTextResponse(payload, media_type="application/x-ndjson")

    return app
