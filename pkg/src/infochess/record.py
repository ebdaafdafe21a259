"""Game records: a complete per-turn log enabling bit-exact replay.

File format is JSONL: a header object carrying the engine version, config
hash and starting kings, then one object per half-turn, then a footer with
the final scores. Squares are algebraic strings, beliefs are 64-element
arrays of decimal floats (Python repr round-trips them exactly).
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

from . import __version__ as ENGINE_VERSION
from .config import GameConfig, config_hash
from .engine import GameState, TurnEntry, apply_move, record_inference, restore_game
from .errors import InfoChessError, ReplayError
from .types import MoveAction, PieceKind, Team, parse_square, square_name


@dataclass
class GameRecord:
    config: GameConfig
    king_starts: dict[Team, int]
    turns: list[TurnEntry]
    final_scores: dict[Team, float]


def record_from_state(state: GameState) -> GameRecord:
    if not state.game_over:
        raise InfoChessError("game is not finished")
    return GameRecord(
        config=state.config,
        king_starts=dict(state.king_starts),
        turns=list(state.turn_log),
        final_scores=dict(state.scores),
    )


def _move_to_json(move: MoveAction, size: int) -> dict:
    if move.is_pass:
        return {"pass": True}
    return {
        "piece": str(move.piece),
        "from": square_name(move.from_sq, size),
        "to": square_name(move.to_sq, size),
    }


def _move_from_json(data: dict, size: int) -> MoveAction:
    if data.get("pass"):
        return MoveAction.passing()
    return MoveAction(
        piece=PieceKind[data["piece"].upper()],
        from_sq=parse_square(data["from"], size),
        to_sq=parse_square(data["to"], size),
    )


def dump_record(record: GameRecord, fh) -> None:
    size = record.config.board_size
    header = {
        "engine_version": ENGINE_VERSION,
        "config_hash": config_hash(record.config),
        "config": record.config.to_json_dict(),
        "king_starts": {str(t): square_name(sq, size) for t, sq in record.king_starts.items()},
    }
    fh.write(json.dumps(header) + "\n")
    for entry in record.turns:
        fh.write(
            json.dumps(
                {
                    "team": str(entry.team),
                    "non_king_move": _move_to_json(entry.non_king_move, size),
                    "king_move": _move_to_json(entry.king_move, size),
                    "belief": list(entry.belief),
                    "true_opponent_king": square_name(entry.true_opponent_king, size),
                    "score_delta": entry.score_delta,
                }
            )
            + "\n"
        )
    fh.write(json.dumps({"final_scores": {str(t): s for t, s in record.final_scores.items()}}) + "\n")


def dumps_record(record: GameRecord) -> str:
    buf = io.StringIO()
    dump_record(record, buf)
    return buf.getvalue()


def load_record(fh) -> GameRecord:
    lines = [line for line in fh.read().splitlines() if line.strip()]
    if len(lines) < 2:
        raise ReplayError("record is truncated")
    header = json.loads(lines[0])
    config = GameConfig.from_json_dict(header["config"])
    if header.get("config_hash") != config_hash(config):
        raise ReplayError("config hash does not match the stored config")
    size = config.board_size
    king_starts = {
        Team[name.upper()]: parse_square(sq, size)
        for name, sq in header["king_starts"].items()
    }
    footer = json.loads(lines[-1])
    if "final_scores" not in footer:
        raise ReplayError("record is missing its final-scores footer")
    final_scores = {Team[name.upper()]: float(s) for name, s in footer["final_scores"].items()}
    turns = []
    for line in lines[1:-1]:
        data = json.loads(line)
        turns.append(
            TurnEntry(
                team=Team[data["team"].upper()],
                non_king_move=_move_from_json(data["non_king_move"], size),
                king_move=_move_from_json(data["king_move"], size),
                belief=tuple(float(p) for p in data["belief"]),
                true_opponent_king=parse_square(data["true_opponent_king"], size),
                score_delta=float(data["score_delta"]),
            )
        )
    return GameRecord(config=config, king_starts=king_starts, turns=turns, final_scores=final_scores)


def loads_record(text: str) -> GameRecord:
    return load_record(io.StringIO(text))


def replay(record: GameRecord) -> GameState:
    """Re-drive the rules engine from a record.

    Returns the reconstructed final state; raises ReplayError carrying the
    first divergent half-turn index if the record disagrees with the rules
    or with its own stored outcomes.
    """
    state = restore_game(record.config, record.king_starts)
    if len(record.turns) != state.half_turn_limit:
        raise ReplayError(
            f"record has {len(record.turns)} half-turns, expected {state.half_turn_limit}",
            turn_index=len(record.turns),
        )
    for index, entry in enumerate(record.turns):
        if entry.team is not state.current_team:
            raise ReplayError(f"half-turn {index} is out of turn order", turn_index=index)
        try:
            apply_move(state, entry.non_king_move)
            apply_move(state, entry.king_move)
            delta = record_inference(state, entry.team, entry.belief)
        except InfoChessError as exc:
            raise ReplayError(f"half-turn {index}: {exc}", turn_index=index) from exc
        logged = state.turn_log[-1]
        if logged.true_opponent_king != entry.true_opponent_king:
            raise ReplayError(
                f"half-turn {index}: true king square diverged", turn_index=index
            )
        if delta != entry.score_delta:
            raise ReplayError(
                f"half-turn {index}: score delta {delta!r} != recorded {entry.score_delta!r}",
                turn_index=index,
            )
    for team in (Team.WHITE, Team.BLACK):
        if state.scores[team] != record.final_scores[team]:
            raise ReplayError(
                f"final score for {team} is {state.scores[team]!r}, recorded {record.final_scores[team]!r}",
                turn_index=len(record.turns),
            )
    return state
