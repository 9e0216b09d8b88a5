"""HTTP session service: a human plays the comparison oracle.

Each session owns one search engine; the service serves the engine's next
query pair and applies the human's answer. Sessions are persisted as
append-only JSONL transcripts keyed by session id, so a restarted server
rebuilds any session by replaying its recorded answers through a fresh
engine (selection is deterministic given the stored seed).
"""
from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .datasets import load_bundled
from .demand import uniform_demand
from .metric import MetricDataset
from .oracle import OracleAnswer
from .search import ComparisonSearch, Strategy, StrategyKind

# worcs-i is deliberately excluded: one of its iterations can fire dozens of
# center-vs-center comparisons, which is unusable pacing for a human oracle.
ALLOWED_STRATEGIES = ("worcs-ii-rank", "worcs-ii-weak", "fast-gts", "random")

_CHOICE_TO_ANSWER = {
    "x": OracleAnswer.CLOSER_X,
    "y": OracleAnswer.CLOSER_Y,
    "unsure": OracleAnswer.UNSURE,
}


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class CreateSessionRequest(BaseModel):
    dataset_id: str
    strategy: str
    alpha: float = Field(ge=1.0)
    seed: int = 0


class AnswerRequest(BaseModel):
    choice: Literal["x", "y", "unsure"]
    seq: int = Field(ge=0)


@dataclass
class Session:
    session_id: str
    dataset_id: str
    dataset: MetricDataset
    strategy: str
    alpha: float
    seed: int
    created_at: float
    engine: ComparisonSearch
    answers: list[str] = field(default_factory=list)
    history: list[dict] = field(default_factory=list)
    last_response: dict | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


def _item_payload(dataset: MetricDataset, idx: int) -> dict:
    label = dataset.labels[idx] if dataset.labels else dataset.ids[idx]
    features = []
    if dataset.features is not None:
        features = [float(v) for v in dataset.features[idx][:8]]
    return {"id": dataset.ids[idx], "label": label, "features": features}


def _progress(session: Session) -> dict:
    vs = session.engine.version_space
    return {"vs_size": len(vs.members), "vs_mass": vs.mass}


def _state_payload(session: Session) -> dict:
    engine = session.engine
    # next_query() may finish the session (singleton version space), so ask
    # it before reading the done flag
    pair = None if engine.done else engine.next_query()
    payload: dict = {"progress": _progress(session)}
    if pair is None:
        if engine.returned is not None:
            payload["result"] = _item_payload(session.dataset, engine.returned)
        else:
            payload["result"] = None
        payload["status"] = "done"
    else:
        x, y = pair
        payload["query"] = {"x": _item_payload(session.dataset, x),
                            "y": _item_payload(session.dataset, y)}
        payload["status"] = "pending"
    return payload


class SessionStore:
    def __init__(self, data_dir: Path, datasets: dict[str, MetricDataset]):
        self._dir = data_dir
        self._dir.mkdir(parents=True, exist_ok=True)
        self._datasets = datasets
        self._sessions: dict[str, Session] = {}
        self._registry_lock = threading.Lock()

    def _build_engine(self, dataset: MetricDataset, strategy: str, alpha: float,
                      seed: int) -> ComparisonSearch:
        return ComparisonSearch(dataset, uniform_demand(dataset.n), alpha,
                                Strategy(StrategyKind(strategy), seed=seed))

    def _path(self, session_id: str) -> Path:
        return self._dir / f"{session_id}.jsonl"

    def create(self, req: CreateSessionRequest) -> Session:
        if req.dataset_id not in self._datasets:
            raise ApiError(404, "dataset_not_found",
                           f"unknown dataset {req.dataset_id!r}")
        if req.strategy not in ALLOWED_STRATEGIES:
            raise ApiError(422, "strategy_not_allowed",
                           f"strategy must be one of {ALLOWED_STRATEGIES}")
        dataset = self._datasets[req.dataset_id]
        session = Session(
            session_id=uuid.uuid4().hex,
            dataset_id=req.dataset_id,
            dataset=dataset,
            strategy=req.strategy,
            alpha=req.alpha,
            seed=req.seed,
            created_at=time.time(),
            engine=self._build_engine(dataset, req.strategy, req.alpha, req.seed),
        )
        with self._registry_lock:
            self._sessions[session.session_id] = session
        header = {"session_id": session.session_id, "dataset_id": session.dataset_id,
                  "strategy": session.strategy, "alpha": session.alpha,
                  "seed": session.seed, "created_at": session.created_at}
        self._path(session.session_id).write_text(json.dumps(header) + "\n")
        return session

    def get(self, session_id: str) -> Session:
        with self._registry_lock:
            session = self._sessions.get(session_id)
        if session is not None:
            return session
        session = self._load(session_id)
        if session is None:
            raise ApiError(404, "session_not_found", f"unknown session {session_id!r}")
        with self._registry_lock:
            return self._sessions.setdefault(session_id, session)

    def _load(self, session_id: str) -> Session | None:
        path = self._path(session_id)
        if not path.exists():
            return None
        lines = path.read_text().strip().splitlines()
        header = json.loads(lines[0])
        dataset = self._datasets.get(header["dataset_id"])
        if dataset is None:
            raise ApiError(409, "dataset_unavailable",
                           "session references an unregistered dataset")
        session = Session(
            session_id=header["session_id"],
            dataset_id=header["dataset_id"],
            dataset=dataset,
            strategy=header["strategy"],
            alpha=header["alpha"],
            seed=header["seed"],
            created_at=header["created_at"],
            engine=self._build_engine(dataset, header["strategy"], header["alpha"],
                                      header["seed"]),
        )
        for line in lines[1:]:
            rec = json.loads(line)
            self._apply_choice(session, rec["choice"], persist=False)
        return session

    def _apply_choice(self, session: Session, choice: str, persist: bool) -> None:
        engine = session.engine
        pair = engine.next_query()
        if pair is None:
            raise ApiError(409, "no_pending_query", "session already finished")
        x, y = pair
        engine.apply_answer(_CHOICE_TO_ANSWER[choice])
        session.history.append({"x": session.dataset.ids[x],
                                "y": session.dataset.ids[y],
                                "answer": _CHOICE_TO_ANSWER[choice].value})
        session.answers.append(choice)
        if persist:
            with open(self._path(session.session_id), "a") as fh:
                fh.write(json.dumps({"seq": len(session.answers) - 1,
                                     "choice": choice}) + "\n")

    def answer(self, session_id: str, req: AnswerRequest) -> dict:
        session = self.get(session_id)
        with session.lock:
            applied = len(session.answers)
            if req.seq == applied - 1 and session.answers and \
                    session.answers[-1] == req.choice and session.last_response:
                return session.last_response  # idempotent retry of the last answer
            if req.seq != applied:
                raise ApiError(409, "sequence_mismatch",
                               f"expected seq {applied}, got {req.seq}")
            self._apply_choice(session, req.choice, persist=True)
            response = _state_payload(session)
            session.last_response = response
            return response


def default_datasets() -> dict[str, MetricDataset]:
    return {"iris": load_bundled("iris"), "wine": load_bundled("wine")}


def create_app(data_dir: str | Path = "worcs-sessions",
               ui_dir: str | Path | None = None,
               datasets: dict[str, MetricDataset] | None = None) -> FastAPI:
    app = FastAPI(title="worcs session service")
    store = SessionStore(Path(data_dir), datasets or default_datasets())
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(_: Request, err: ApiError):
        return JSONResponse(status_code=err.status,
                            content={"code": err.code, "message": err.message})

    @app.post("/v1/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        session = store.create(req)
        payload = _state_payload(session)
        payload["session_id"] = session.session_id
        return payload

    @app.post("/v1/sessions/{session_id}/answer")
    def post_answer(session_id: str, req: AnswerRequest):
        return store.answer(session_id, req)

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        session = store.get(session_id)
        with session.lock:
            payload = _state_payload(session)
            payload.update({
                "session_id": session.session_id,
                "dataset_id": session.dataset_id,
                "strategy": session.strategy,
                "alpha": session.alpha,
                "seed": session.seed,
                "created_at": session.created_at,
                "history": list(session.history),
            })
            return payload

    @app.get("/v1/datasets")
    def list_datasets():
        out = []
        for name, ds in store._datasets.items():
            dim = 0 if ds.features is None else int(ds.features.shape[1])
            out.append({"id": name, "n": ds.n, "dim": dim,
                        "metric": ds.metric or "custom"})
        return {"datasets": out}

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
