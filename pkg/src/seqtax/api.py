"""HTTP API for wizard sessions, batch classification, schemas and corpus.

Sessions live in memory with TTL eviction; everything else is served from
immutable snapshots taken at app creation. Request bodies are parsed by
hand so malformed JSON or shapes answer 400 while semantic rejections
(unknown category, arity) answer 422, each as {code, message, subject}.
"""
from __future__ import annotations

import json
import logging
import secrets
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Sequence

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .classifier import classification_from_answers, classification_to_dict, classify
from .corpus import Corpus, dossier_to_dict, golden_corpus
from .defense import DefenseAction, builtin_actions, plan, plan_to_dict
from .errors import ParseError
from .evidence import evidence_from_dict
from .rules import Rule, builtin_rules
from .schema import Question, TaxonomySchema, builtin_sequential_schema, schema_to_dict

logger = logging.getLogger("seqtax.api")

DEFAULT_SESSION_TTL = 24 * 60 * 60.0


def _iso(timestamp: float) -> str:
    return datetime.fromtimestamp(timestamp, tz=timezone.utc).isoformat()


@dataclass
class WizardSession:
    id: str
    schema_id: str
    answers: dict[str, list[str]] = field(default_factory=dict)
    created_at: float = field(default_factory=time.time)
    updated_at: float = field(default_factory=time.time)

    def to_dict(self) -> dict[str, Any]:
        return {
            "session_id": self.id,
            "schema_id": self.schema_id,
            "answers": {qid: list(cids) for qid, cids in self.answers.items()},
            "created_at": _iso(self.created_at),
            "updated_at": _iso(self.updated_at),
        }


class SessionStore:
    """Thread-safe in-memory session table with lazy TTL eviction."""

    def __init__(self, ttl: float = DEFAULT_SESSION_TTL):
        self._ttl = ttl
        self._lock = threading.Lock()
        self._sessions: dict[str, WizardSession] = {}

    def _purge(self, now: float) -> None:
        expired = [sid for sid, s in self._sessions.items()
                   if now - s.updated_at > self._ttl]
        for sid in expired:
            del self._sessions[sid]

    def create(self, schema_id: str) -> WizardSession:
        with self._lock:
            now = time.time()
            self._purge(now)
            session = WizardSession(id=secrets.token_urlsafe(32), schema_id=schema_id,
                                    created_at=now, updated_at=now)
            self._sessions[session.id] = session
            return session

    def get(self, session_id: str) -> WizardSession | None:
        with self._lock:
            self._purge(time.time())
            return self._sessions.get(session_id)

    def set_answer(self, session_id: str, question_id: str,
                   category_ids: list[str]) -> WizardSession | None:
        with self._lock:
            self._purge(time.time())
            session = self._sessions.get(session_id)
            if session is None:
                return None
            session.answers[question_id] = list(category_ids)
            session.updated_at = time.time()
            return session


def _error(status: int, code: str, message: str, subject: str | None = None) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"code": code, "message": message, "subject": subject})


def _next_question(schema: TaxonomySchema, answers: dict[str, list[str]]) -> Question | None:
    for question in schema.ordered_questions():
        if question.id not in answers:
            return question
    return None


def _question_view(question: Question) -> dict[str, Any]:
    # Same category shape as GET /schemas: parent omitted on roots.
    categories = []
    for category in question.categories:
        item: dict[str, Any] = {
            "id": category.id,
            "label": category.label,
            "description": category.description,
        }
        if category.parent is not None:
            item["parent"] = category.parent
        categories.append(item)
    return {
        "id": question.id,
        "label": question.label,
        "prompt": question.prompt,
        "order": question.order,
        "group": question.group,
        "selection": question.selection,
        "categories": categories,
    }


def create_app(schema: TaxonomySchema | None = None,
               rules: Sequence[Rule] | None = None,
               corpus: Corpus | None = None,
               actions: Sequence[DefenseAction] | None = None,
               ui_origin: str | None = None,
               ui_dir: str | None = None,
               session_ttl: float = DEFAULT_SESSION_TTL) -> FastAPI:
    schema = schema if schema is not None else builtin_sequential_schema()
    rules = tuple(rules) if rules is not None else builtin_rules()
    corpus = corpus if corpus is not None else golden_corpus()
    actions = tuple(actions) if actions is not None else builtin_actions()
    sessions = SessionStore(ttl=session_ttl)

    app = FastAPI(title="seqtax", version=__version__)

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        response = await call_next(request)
        logger.info("%s %s -> %d", request.method, request.url.path, response.status_code)
        return response

    if ui_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(CORSMiddleware, allow_origins=[ui_origin],
                           allow_methods=["*"], allow_headers=["*"])

    @app.get("/schemas")
    def get_schemas() -> list[dict[str, Any]]:
        return [schema_to_dict(schema)]

    @app.post("/sessions", status_code=201)
    def create_session() -> dict[str, str]:
        session = sessions.create(schema.id)
        return {"session_id": session.id}

    @app.get("/sessions/{session_id}/next")
    def session_next(session_id: str) -> Any:
        session = sessions.get(session_id)
        if session is None:
            return _error(404, "not_found", "unknown session", session_id)
        question = _next_question(schema, session.answers)
        if question is None:
            return {"done": True, "question": None}
        return {"done": False, "question": _question_view(question)}

    @app.post("/sessions/{session_id}/answers")
    async def session_answer(session_id: str, request: Request) -> Any:
        if sessions.get(session_id) is None:
            return _error(404, "not_found", "unknown session", session_id)
        try:
            body = json.loads(await request.body())
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            return _error(400, "bad_request", f"body is not valid JSON: {exc}")
        if not isinstance(body, dict):
            return _error(400, "bad_request", "body must be a JSON object")
        question_id = body.get("question_id")
        category_ids = body.get("category_ids")
        if not isinstance(question_id, str):
            return _error(400, "bad_request", "missing question_id", "question_id")
        if not isinstance(category_ids, list) \
                or not all(isinstance(c, str) for c in category_ids):
            return _error(400, "bad_request",
                          "category_ids must be an array of strings", "category_ids")
        if not schema.has_question(question_id):
            return _error(404, "not_found", "unknown question", question_id)
        question = schema.question(question_id)
        for cid in category_ids:
            if not question.has_category(cid):
                return _error(422, "invalid_category",
                              f"category {cid!r} is not part of question {question_id!r}",
                              cid)
        if not category_ids:
            return _error(422, "arity_violation",
                          "an answer needs at least one category", question_id)
        if question.selection == "single" and len(category_ids) > 1:
            return _error(422, "arity_violation",
                          f"question {question_id!r} takes exactly one category",
                          question_id)
        session = sessions.set_answer(session_id, question_id, category_ids)
        if session is None:
            return _error(404, "not_found", "unknown session", session_id)
        return session.to_dict()

    @app.get("/sessions/{session_id}/result")
    def session_result(session_id: str) -> Any:
        session = sessions.get(session_id)
        if session is None:
            return _error(404, "not_found", "unknown session", session_id)
        classification = classification_from_answers(schema, session.answers)
        defense_plan = plan(schema, classification, actions=actions)
        return {
            "classification": classification_to_dict(classification),
            "defense_plan": plan_to_dict(defense_plan),
        }

    @app.post("/classify")
    async def classify_endpoint(request: Request) -> Any:
        try:
            body = json.loads(await request.body())
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            return _error(400, "bad_request", f"body is not valid JSON: {exc}")
        try:
            evidence = evidence_from_dict(body)
        except ParseError as exc:
            return _error(400, "bad_request", str(exc), exc.subject)
        classification = classify(schema, rules, evidence)
        defense_plan = plan(schema, classification, actions=actions,
                            attack_name=evidence.attack_name)
        return {
            "classification": classification_to_dict(classification),
            "defense_plan": plan_to_dict(defense_plan),
        }

    @app.get("/corpus")
    def corpus_names() -> list[str]:
        return sorted(corpus.dossiers)

    @app.get("/corpus/{name}")
    def corpus_detail(name: str) -> Any:
        dossier = corpus.dossiers.get(name)
        if dossier is None:
            return _error(404, "not_found", "unknown dossier", name)
        return dossier_to_dict(dossier)

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
