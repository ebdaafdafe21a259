"""HTTP + websocket front of the play service.

Stateless request/response endpoints exist for every message type; the
websocket channel speaks the same JSON frames bidirectionally. Message
bodies are exactly the wire schema; the game record (which contains the
ground truth) is only obtainable after game over.
"""

from __future__ import annotations

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse, PlainTextResponse

from ..beliefs.model import BeliefModel
from ..config import GameConfig
from ..errors import (
    ConfigError,
    InfoChessError,
    RulesError,
    SequencingError,
    SessionGoneError,
    ValidationError,
)
from ..record import dumps_record, record_from_state
from ..types import TurnPhase
from . import wire
from .sessions import DEFAULT_IDLE_TIMEOUT, Session, SessionManager

ERROR_STATUS = {
    "bad_request": 400,
    "validation": 400,
    "illegal_move": 409,
    "sequencing": 409,
    "gone": 410,
}


def _error_payload(exc: Exception) -> tuple[int, dict]:
    if isinstance(exc, SessionGoneError):
        code = "gone"
    elif isinstance(exc, RulesError):
        code = "illegal_move"
    elif isinstance(exc, SequencingError):
        code = "sequencing"
    elif isinstance(exc, (ValidationError, ConfigError)):
        code = "validation"
    else:
        code = "bad_request"
    return ERROR_STATUS[code], wire.error_msg(code, str(exc))


def create_app(
    belief_model: BeliefModel | None = None,
    blind: bool = False,
    idle_timeout: float = DEFAULT_IDLE_TIMEOUT,
    default_config: GameConfig | None = None,
    now_fn=None,
) -> FastAPI:
    manager = SessionManager(
        belief_model=belief_model,
        blind=blind,
        idle_timeout=idle_timeout,
        default_config=default_config,
        **({"now_fn": now_fn} if now_fn is not None else {}),
    )
    app = FastAPI(title="infochess service")
    app.state.manager = manager

    def state_or_over(session: Session) -> dict:
        if session.state.game_over:
            return wire.game_over(session.id, session.state, session.human_team)
        return wire.state_update(session.id, session.state, session.human_team, manager.blind)

    def handle_submit_move(session: Session, payload: dict) -> list[dict]:
        next_phase = manager.submit_move(session, payload)
        size = session.state.config.board_size
        if next_phase is TurnPhase.KING_MOVE:
            moves = manager.human_legal_moves(session)
            return [wire.legal_moves_msg(session.id, moves, size, next_phase.value)]
        # king move accepted: the inference-point view requests the inference
        return [wire.state_update(session.id, session.state, session.human_team, manager.blind)]

    def handle_submit_inference(session: Session, payload: dict) -> list[dict]:
        delta = manager.submit_inference(session, payload)
        shown = None if manager.blind else delta
        return [
            wire.turn_result(session.id, session.state.turn_index, shown),
            state_or_over(session),
        ]

    @app.post("/create-session")
    def create_session(payload: dict):
        try:
            session = manager.create_session(
                agent_spec=payload.get("agent", "random"),
                human_team=payload.get("human_team", "random"),
                seed=payload.get("seed"),
            )
        except (InfoChessError, KeyError) as exc:
            status, body = _error_payload(exc)
            return JSONResponse(body, status_code=status)
        return {"session": session.id, "messages": [state_or_over(session)]}

    @app.get("/state")
    def get_state(session: str):
        try:
            s = manager.get(session)
            return {"messages": [state_or_over(s)]}
        except InfoChessError as exc:
            status, body = _error_payload(exc)
            return JSONResponse(body, status_code=status)

    @app.get("/legal-moves")
    def get_legal_moves(session: str):
        try:
            s = manager.get(session)
            moves = manager.human_legal_moves(s)
            msg = wire.legal_moves_msg(s.id, moves, s.state.config.board_size, s.state.phase.value)
            return {"messages": [msg]}
        except InfoChessError as exc:
            status, body = _error_payload(exc)
            return JSONResponse(body, status_code=status)

    @app.post("/submit-move")
    def submit_move(payload: dict):
        try:
            s = manager.get(str(payload.get("session")))
            with s.lock:
                return {"messages": handle_submit_move(s, payload)}
        except RulesError as exc:
            status, body = _error_payload(exc)
            try:
                moves = manager.human_legal_moves(manager.get(str(payload.get("session"))))
                body["legal_moves"] = [
                    wire.move_json(m, manager.default_config.board_size) for m in moves
                ]
            except InfoChessError:
                pass
            return JSONResponse(body, status_code=status)
        except InfoChessError as exc:
            status, body = _error_payload(exc)
            return JSONResponse(body, status_code=status)

    @app.post("/submit-inference")
    def submit_inference(payload: dict):
        try:
            s = manager.get(str(payload.get("session")))
            with s.lock:
                return {"messages": handle_submit_inference(s, payload)}
        except InfoChessError as exc:
            status, body = _error_payload(exc)
            return JSONResponse(body, status_code=status)

    @app.get("/record")
    def get_record(session: str):
        try:
            s = manager.get(session)
        except InfoChessError as exc:
            status, body = _error_payload(exc)
            return JSONResponse(body, status_code=status)
        if not s.state.game_over:
            status, body = _error_payload(SequencingError("the game is not over yet"))
            return JSONResponse(body, status_code=status)
        return PlainTextResponse(
            dumps_record(record_from_state(s.state)), media_type="application/x-ndjson"
        )

    @app.websocket("/ws")
    async def websocket_channel(ws: WebSocket):
        await ws.accept()
        try:
            while True:
                frame = await ws.receive_json()
                kind = frame.get("type")
                try:
                    if kind == "create_session":
                        session = manager.create_session(
                            agent_spec=frame.get("agent", "random"),
                            human_team=frame.get("human_team", "random"),
                            seed=frame.get("seed"),
                        )
                        await ws.send_json({"type": "session_created", "session": session.id,
                                            "protocol_version": wire.PROTOCOL_VERSION})
                        await ws.send_json(state_or_over(session))
                        continue
                    session = manager.get(str(frame.get("session")))
                    if kind == "submit_move":
                        with session.lock:
                            messages = handle_submit_move(session, frame)
                    elif kind == "submit_inference":
                        with session.lock:
                            messages = handle_submit_inference(session, frame)
                    elif kind == "get_state":
                        messages = [state_or_over(session)]
                    elif kind == "get_legal_moves":
                        moves = manager.human_legal_moves(session)
                        messages = [
                            wire.legal_moves_msg(
                                session.id, moves, session.state.config.board_size,
                                session.state.phase.value,
                            )
                        ]
                    else:
                        messages = [wire.error_msg("bad_request", f"unknown frame type {kind!r}")]
                except InfoChessError as exc:
                    _, body = _error_payload(exc)
                    messages = [body]
                for message in messages:
                    await ws.send_json(message)
        except WebSocketDisconnect:
            return

    return app
