"""Local JSON-over-HTTP facade for solver queries and play sessions.

Sessions live in memory behind per-session locks; solve endpoints are pure
queries.  Errors come back as ``{"code", "message"}`` with 400 for invalid
actions, 404 for unknown sessions, 409 for wrong phase or actor, and 422
when a request exceeds the solver's state cap.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .bidding import Player, Rule
from .gamespec import GameSpecError, parse_game
from .graphs import GameGraph
from .holdings import ChipHolding, Marker
from .oracle import solve_chip_states
from .play import Phase, PlayError, PlaySession, SessionConfig, replay
from .richman import ReconstructionError, richman_values
from .thresholds import THRESHOLD_RULES, decode_value, threshold_keys


SERVICE_STATE_CAP = 250_000


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        self.message = message


class SessionStore:
    """Threadsafe id -> session map with per-session operation locks."""

    def __init__(self, snapshot_path: Optional[str] = None):
        self.sessions: dict[str, PlaySession] = {}
        self.locks: dict[str, threading.Lock] = {}
        self.registry_lock = threading.Lock()
        self.snapshot_path = snapshot_path

    def create(self, session: PlaySession) -> str:
        sid = uuid.uuid4().hex[:12]
        with self.registry_lock:
            self.sessions[sid] = session
            self.locks[sid] = threading.Lock()
        return sid

    def get(self, sid: str) -> tuple[PlaySession, threading.Lock]:
        with self.registry_lock:
            if sid not in self.sessions:
                raise ApiError(404, "unknown_session", f"no session {sid!r}")
            return self.sessions[sid], self.locks[sid]

    def snapshot(self, path: Optional[str] = None) -> str:
        target = path or self.snapshot_path
        if not target:
            raise ApiError(400, "no_snapshot_path", "no snapshot path configured")
        with self.registry_lock:
            docs = {sid: s.to_document() for sid, s in self.sessions.items()}
        os.makedirs(os.path.dirname(target) or ".", exist_ok=True)
        with open(target, "w") as fh:
            json.dump(docs, fh, indent=2, sort_keys=True)
        return target


class CreateSession(BaseModel):
    game: str
    k: int = Field(ge=0)
    split: str  # e.g. "4*/4"
    rule: Rule = Rule.STANDARD
    ai_controls: list[Player] = []
    hints: bool = False


class BidBody(BaseModel):
    player: Player
    bid: int


class TieBody(BaseModel):
    player: Player
    self_win: bool


class MoveBody(BaseModel):
    player: Player
    election: str = "self"
    move: Optional[int] = None
    cell: Optional[int] = None


class SolveBody(BaseModel):
    game: str
    k: Optional[int] = Field(default=None, ge=0)
    k_range: Optional[list[int]] = None
    rule: Rule = Rule.STANDARD


def _play_call(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PlayError as e:
        msg = str(e)
        phaseish = ("phase" in msg) or ("already bid" in msg) or msg.startswith("only") or (
            "not the forced mover" in msg
        )
        raise ApiError(409 if phaseish else 400, "invalid_action", msg)


def _parse_game_or_400(spec: str) -> GameGraph:
    try:
        return parse_game(spec)
    except (GameSpecError, OSError) as e:
        raise ApiError(400, "bad_game_spec", str(e))


def session_view(session: PlaySession, sid: str) -> dict:
    doc = session.to_document()
    doc["id"] = sid
    actor = session.actor()
    legal: dict = {}
    if session.phase in (Phase.AWAITING_ELECTION, Phase.AWAITING_MOVE) and actor:
        if session.board is not None:
            legal["cells"] = session.legal_cells(actor)
        else:
            legal["moves"] = session.legal_moves(actor)
        if session.phase is Phase.AWAITING_ELECTION:
            legal["elections"] = ["self"] if not session.legal_moves(actor.other) else (
                ["self", "force_opponent"] if session.legal_moves(actor) else ["force_opponent"]
            )
    doc["legal"] = legal
    if session.config.hints and session.phase is not Phase.FINISHED:
        doc["hints"] = _hints(session)
    return doc


def _hints(session: PlaySession) -> dict:
    """Threshold values of the positions reachable in one move."""
    if session.rule not in THRESHOLD_RULES or session.graph.bounded_depth is None:
        return {}
    keys = threshold_keys(session.graph, session.k, session.rule)
    out: dict = {"alice_needs": {}, "current": None}
    key = keys[session.position]
    if key is not None:
        out["current"] = str(decode_value(key, session.k, session.rule))
    if session.board is not None:
        for cell in range(9):
            if session.board[cell] != ".":
                continue
            from . import ttt as tttmod

            entry = {}
            for mark in ("A", "B"):
                v = session.graph.labels.index(
                    tttmod.canonical(tttmod.place(session.board, cell, mark))
                )
                entry[mark] = str(decode_value(keys[v], session.k, session.rule))
            out["alice_needs"][str(cell)] = entry
    else:
        for color, adj in (("A", session.graph.red), ("B", session.graph.blue)):
            for t in adj[session.position]:
                out["alice_needs"].setdefault(str(t), {})[color] = str(
                    decode_value(keys[t], session.k, session.rule)
                )
    return out


def create_app(store: SessionStore | None = None) -> FastAPI:
    app = FastAPI(title="bidgames", docs_url="/docs")
    app.state.store = store or SessionStore()

    @app.exception_handler(ApiError)
    async def on_api_error(_req: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status, content={"code": exc.code, "message": exc.message}
        )

    @app.post("/sessions")
    def create_session(body: CreateSession):
        graph = _parse_game_or_400(body.game)
        try:
            alice_amount, holder = SessionConfig.parse_split(body.split)
        except PlayError as e:
            raise ApiError(400, "bad_split", str(e))
        if body.rule is not Rule.LADIES_FIRST and holder is None:
            raise ApiError(400, "bad_split", "a token holder must be marked with '*'")
        if body.rule is Rule.LADIES_FIRST:
            holder = None
        if alice_amount + (body.k - alice_amount) != body.k or alice_amount > body.k:
            raise ApiError(400, "bad_split", "split does not sum to k")
        cfg = SessionConfig(
            game=body.game,
            k=body.k,
            alice_amount=alice_amount,
            advantage=holder,
            rule=body.rule,
            ai_controls=frozenset(body.ai_controls),
            hints=body.hints,
        )
        session = _play_call(PlaySession, cfg, graph=graph)
        _play_call(session.run_ai)
        sid = app.state.store.create(session)
        return session_view(session, sid)

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        session, _lock = app.state.store.get(sid)
        return session_view(session, sid)

    @app.post("/sessions/{sid}/bid")
    def post_bid(sid: str, body: BidBody):
        session, lock = app.state.store.get(sid)
        with lock:
            _play_call(session.submit_bid, body.player, body.bid)
            _play_call(session.run_ai)
            return session_view(session, sid)

    @app.post("/sessions/{sid}/tie")
    def post_tie(sid: str, body: TieBody):
        session, lock = app.state.store.get(sid)
        with lock:
            _play_call(session.resolve_tie, body.player, body.self_win)
            _play_call(session.run_ai)
            return session_view(session, sid)

    @app.post("/sessions/{sid}/move")
    def post_move(sid: str, body: MoveBody):
        session, lock = app.state.store.get(sid)
        with lock:
            _play_call(
                session.elect_and_move, body.player, body.election, move=body.move, cell=body.cell
            )
            _play_call(session.run_ai)
            return session_view(session, sid)

    @app.post("/solve/richman")
    def solve_richman(body: SolveBody):
        graph = _parse_game_or_400(body.game)
        try:
            prof = richman_values(graph)
        except ReconstructionError as e:
            raise ApiError(422, "reconstruction_failed", str(e))
        r0 = prof.r[graph.start]
        return {
            "R": str(r0),
            "vertices": {
                graph.labels[v]: str(prof.r[v])
                for v in range(graph.num_vertices)
                if prof.r[v] is not None
            },
        }

    @app.post("/solve/threshold")
    def solve_threshold(body: SolveBody):
        graph = _parse_game_or_400(body.game)
        if body.rule not in THRESHOLD_RULES:
            raise ApiError(400, "bad_rule", "threshold tables exist for standard and make_it_take_it")
        if graph.bounded_depth is None:
            raise ApiError(422, "unbounded_game", "use /solve/oracle for cyclic games")
        ks = body.k_range if body.k_range else [body.k if body.k is not None else 0]
        out = {}
        for k in ks:
            keys = threshold_keys(graph, k, body.rule)
            key = keys[graph.start]
            assert key is not None
            out[str(k)] = str(decode_value(key, k, body.rule))
        return {"f": out}

    @app.post("/solve/oracle")
    def solve_oracle(body: SolveBody):
        graph = _parse_game_or_400(body.game)
        k = body.k if body.k is not None else 0
        try:
            table = solve_chip_states(graph, k, body.rule, state_cap=SERVICE_STATE_CAP)
        except ValueError as e:
            raise ApiError(422, "state_cap", str(e))
        rows = [
            {"vertex": v, "alice": a, "advantage": adv, "outcome": out}
            for (v, a, adv, out) in table.csv_rows()
        ]
        return {"k": k, "rule": body.rule.value, "outcomes": rows}

    @app.post("/admin/snapshot")
    def snapshot(path: Optional[str] = None):
        return {"path": app.state.store.snapshot(path)}

    return app


def serve(host: str = "127.0.0.1", port: int = 8714, snapshot_path: Optional[str] = None) -> None:
    import uvicorn

    app = create_app(SessionStore(snapshot_path))
    uvicorn.run(app, host=host, port=port, log_level="warning")
