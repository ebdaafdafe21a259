"""Wire message schema for the play service.

Every server frame is a JSON object tagged with ``type`` and carrying
``protocol_version``. State updates are built exclusively from the human
player's own observation, so no fogged opponent piece can appear in any
message before game over.
"""

from __future__ import annotations

from ..engine import GameState, PlayerObservation, observe
from ..record import dumps_record, record_from_state
from ..types import MoveAction, Team, square_name
from ..geometry import mask_to_squares

PROTOCOL_VERSION = 1


def _frame(type_: str, **fields) -> dict:
    return {"type": type_, "protocol_version": PROTOCOL_VERSION, **fields}


def observation_json(obs: PlayerObservation, size: int) -> dict:
    return {
        "viewer": str(obs.viewer),
        "turn": obs.turn_index,
        "visible": [square_name(sq, size) for sq in mask_to_squares(obs.visible)],
        "pieces": [
            {"kind": str(kind), "team": str(team), "square": square_name(sq, size)}
            for kind, team, sq in obs.seen
        ],
    }


def move_json(move: MoveAction, size: int) -> dict:
    if move.is_pass:
        return {"pass": True}
    return {
        "piece": str(move.piece),
        "from": square_name(move.from_sq, size),
        "to": square_name(move.to_sq, size),
    }


def state_update(session_id: str, state: GameState, human_team: Team, blind: bool) -> dict:
    size = state.config.board_size
    obs = observe(state, human_team)
    return _frame(
        "state_update",
        session=session_id,
        turn=state.turn_index,
        your_turn_number=obs.turn_index,
        phase=state.phase.value,
        to_move=str(state.current_team),
        your_team=str(human_team),
        your_view=observation_json(obs, size),
        your_score=None if blind else state.scores[human_team],
        opponent_score_visible=not blind,
        opponent_score=None if blind else state.scores[human_team.opponent],
        game_over=state.game_over,
    )


def legal_moves_msg(session_id: str, moves: list[MoveAction], size: int, phase: str) -> dict:
    return _frame(
        "legal_moves", session=session_id, phase=phase, moves=[move_json(m, size) for m in moves]
    )


def turn_result(session_id: str, turn: int, score_delta: float | None) -> dict:
    return _frame("turn_result", session=session_id, turn=turn, score_delta=score_delta)


def game_over(session_id: str, state: GameState, human_team: Team) -> dict:
    record = record_from_state(state)
    final = {str(t): s for t, s in state.scores.items()}
    white, black = state.scores[Team.WHITE], state.scores[Team.BLACK]
    winner = "draw" if white == black else str(Team.WHITE if white > black else Team.BLACK)
    return _frame(
        "game_over",
        session=session_id,
        final_scores=final,
        winner=winner,
        your_team=str(human_team),
        seed=state.config.seed,
        record_jsonl=dumps_record(record),
    )


def error_msg(code: str, message: str, **extra) -> dict:
    return _frame("error", code=code, message=message, **extra)
