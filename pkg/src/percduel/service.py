"""Local HTTP+JSON game service: the UI's human plays Maker, the selected
Breaker strategy replies automatically.

State payloads carry everything the board view renders (claims, free
boundary, edge classes, strategy geometry, budgets) plus a canonical state
hash so clients can prove they display exactly the engine's state.
"""

from __future__ import annotations

import hashlib
import secrets
import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .boards import (
    PollutedBoard,
    board_header,
    certify_barred,
    choose_origin,
    sample_bond_percolation,
)
from .engine import (
    Bias,
    GameState,
    IllegalMove,
    Status,
    Variant,
    apply_move,
    free_boundary,
    new_game,
)
from .lattice import Box, Edge, format_edge, parse_edge, sorted_edges
from .match import FORFEIT, Transcript, board_spec_for, serialize
from .strategies import Strategy3, Strategy4, Strategy5, classify_boundary, potentials


def state_hash(state: GameState) -> str:
    """Canonical digest of the rules-visible state; the UI recomputes it."""
    board_id = "lattice" if state.board is None else board_header(state.board)
    parts = [
        state.variant.value,
        f"{state.bias.m},{state.bias.b},{state.bias.c},{state.bias.s}",
        f"{state.origin[0]},{state.origin[1]}",
        ";".join(format_edge(e) for e in sorted_edges(state.maker)),
        ";".join(format_edge(e) for e in sorted_edges(state.breaker)),
        str(state.round_no),
        state.status.value,
        board_id,
    ]
    return hashlib.sha256("|".join(parts).encode()).hexdigest()


class BoardSpec(BaseModel):
    window: tuple[int, int, int, int] = (-50, -50, 50, 50)  # xmin,ymin,xmax,ymax
    p: float = 0.55
    seed: int = 0


class NewGameRequest(BaseModel):
    variant: str = "unlimited"
    m: int = 1
    b: int = 1
    c: int = 0
    s: int = 0
    breaker: str = "strategy5"
    board: BoardSpec | None = None
    origin: tuple[int, int] | None = None
    origin_policy: str = "scan_adversarial"


class MakerMoveRequest(BaseModel):
    edges: list[str] = Field(default_factory=list)


@dataclass
class Session:
    sid: str
    state: GameState
    strategy: object
    transcript: Transcript
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_breaker_move: tuple[Edge, ...] = ()
    diagnostics_history: dict[str, dict] = field(default_factory=dict)


def _strategy_for(name: str, state: GameState):
    if name == "strategy3":
        return Strategy3()
    if name == "strategy4":
        return Strategy4()
    if name == "strategy5":
        if state.board is None:
            raise HTTPException(400, detail="strategy5 needs a polluted board")
        cert = certify_barred(state.board, state.origin)
        if cert is None:
            raise HTTPException(400, detail="origin does not certify")
        return Strategy5(cert)
    raise HTTPException(400, detail=f"unknown breaker strategy {name!r}")


def _state_payload(session: Session) -> dict:
    state = session.state
    payload: dict = {
        "session": session.sid,
        "variant": state.variant.value,
        "bias": {"m": state.bias.m, "b": state.bias.b,
                 "c": state.bias.c, "s": state.bias.s},
        "origin": list(state.origin),
        "round": state.round_no,
        "status": state.status.value,
        "maker": [format_edge(e) for e in sorted_edges(state.maker)],
        "breaker": [format_edge(e) for e in sorted_edges(state.breaker)],
        "last_breaker_move": [format_edge(e) for e in session.last_breaker_move],
        "budget": {
            "cap": (state.round_no + 1) * state.bias.m + state.bias.c,
            "used": sum(state.maker_counts),
            "headroom": state.maker_budget(),
        },
        "state_hash": state_hash(state),
    }
    if state.board is None:
        payload["board"] = "lattice"
    else:
        w = state.board.window
        payload["board"] = {
            "window": [w.xmin, w.ymin, w.xmax, w.ymax],
            "p": state.board.p,
            "seed": state.board.seed,
            "open": [format_edge(e) for e in state.board.open_sorted()],
        }
    if state.variant is Variant.LIMITED and state.status is Status.ONGOING:
        payload["free_boundary"] = [
            format_edge(e) for e in sorted_edges(free_boundary(state))]
        payload["classes"] = {
            format_edge(e): cls for e, cls in classify_boundary(state).items()}
        v, w_pot = potentials(state)
        payload["potentials"] = {"v": v, "w": w_pot}
    diag = getattr(session.strategy, "diagnostics", None)
    if diag is not None:
        payload["diagnostics"] = diag(state)
    payload["diagnostics_history"] = session.diagnostics_history
    return payload


def create_app() -> FastAPI:
    app = FastAPI(title="percduel service")
    sessions: dict[str, Session] = {}

    @app.post("/games")
    def create_game(req: NewGameRequest):
        board: PollutedBoard | None = None
        if req.board is not None:
            x0, y0, x1, y1 = req.board.window
            board = sample_bond_percolation(Box(x0, x1, y0, y1),
                                            req.board.p, req.board.seed)
        origin = tuple(req.origin) if req.origin else None
        if origin is None:
            if board is None:
                origin = (0, 0)
            else:
                origin = choose_origin(board, req.origin_policy)
                if origin is None:
                    raise HTTPException(400, detail="no vertex certifies")
        try:
            bias = Bias(m=req.m, b=req.b, c=req.c, s=req.s)
            state = new_game(req.variant, bias, board, origin)
        except (IllegalMove, ValueError) as exc:
            raise HTTPException(400, detail=str(exc))
        strategy = _strategy_for(req.breaker, state)
        sid = secrets.token_hex(8)
        transcript = Transcript(
            variant=state.variant.value, m=bias.m, b=bias.b, c=bias.c, s=bias.s,
            board_spec=board_spec_for(board), origin=origin,
            seed=req.board.seed if req.board else 0)
        if state.status is not Status.ONGOING:
            transcript.outcome = state.status.value
        sessions[sid] = Session(sid=sid, state=state, strategy=strategy,
                                transcript=transcript)
        return _state_payload(sessions[sid])

    def _session(sid: str) -> Session:
        try:
            return sessions[sid]
        except KeyError:
            raise HTTPException(404, detail="unknown session")

    @app.get("/games/{sid}")
    def get_game(sid: str):
        return _state_payload(_session(sid))

    @app.get("/games/{sid}/transcript")
    def get_transcript(sid: str):
        from fastapi.responses import PlainTextResponse

        session = _session(sid)
        with session.lock:
            t = session.transcript
            state = session.state
            if state.status is not Status.ONGOING:
                t.outcome = state.status.value
            elif state.board is not None:
                t.outcome = Status.MAKER_ESCAPED_HORIZON.value
            else:
                t.outcome = "round_limit"
            t.final_round = state.round_no
            return PlainTextResponse(serialize(t))

    @app.post("/games/{sid}/maker-move")
    def maker_move(sid: str, req: MakerMoveRequest):
        session = _session(sid)
        with session.lock:
            state = session.state
            if state.status is not Status.ONGOING:
                raise HTTPException(400, detail="game over")
            try:
                edges = [parse_edge(t) for t in req.edges]
            except ValueError as exc:
                raise HTTPException(400, detail=str(exc))
            rnd = state.round_no + 1
            try:
                apply_move(state, "maker", edges, check_status=False)
            except IllegalMove as exc:
                raise HTTPException(400, detail=exc.rule)
            session.transcript.moves.append(("M", rnd, tuple(edges)))
            reply = session.strategy.move(state)
            if reply is FORFEIT:
                state.status = Status.FORFEIT_BY_BREAKER
                session.last_breaker_move = ()
            else:
                reply = tuple(reply)
                apply_move(state, "breaker", reply, check_status=True)
                session.transcript.moves.append(("B", rnd, reply))
                session.last_breaker_move = reply
            diag = getattr(session.strategy, "diagnostics", None)
            if diag is not None:
                session.diagnostics_history[str(rnd)] = diag(state)
            return _state_payload(session)

    @app.delete("/games/{sid}")
    def delete_game(sid: str):
        _session(sid)
        del sessions[sid]
        return {"deleted": sid}

    return app
