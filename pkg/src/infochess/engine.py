"""The rules engine: state, movement, visibility, turn sequencing, scoring.

A full turn for one side is three phases in strict order:
NON_KING_MOVE, then KING_MOVE, then INFERENCE. Movement is one square in
any direction for every piece, destination must be unoccupied, and there
are no captures. A phase with no legal destination becomes a forced pass.
After the king move the acting player's observation snapshot is appended
to their history; that snapshot is the inference input. The inference is
scored by the oracle as the probability mass the submitted belief places
on the true opponent king square.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import GameConfig
from .errors import RulesError, SequencingError, ValidationError
from .geometry import BoardGeometry, geometry
from .rng import STREAM_PLACEMENT, game_stream
from .types import (
    MoveAction,
    Piece,
    PieceKind,
    Team,
    TurnPhase,
    chebyshev,
    square_name,
)

BELIEF_SUM_TOL = 1e-9


@dataclass(frozen=True)
class PlayerObservation:
    """One player's fog-masked snapshot.

    ``visible`` is a square mask; ``seen`` lists every own piece plus every
    opponent piece standing on a visible square, sorted by square.
    ``turn_index`` counts the viewer's own completed turns (0 for the
    initial snapshot), so a player's history carries strictly increasing
    indices.
    """

    viewer: Team
    visible: int
    seen: tuple[tuple[PieceKind, Team, int], ...]
    turn_index: int

    def find(self, kind: PieceKind, team: Team) -> int | None:
        for k, t, sq in self.seen:
            if k is kind and t is team:
                return sq
        return None

    @property
    def opponent_king_square(self) -> int | None:
        return self.find(PieceKind.KING, self.viewer.opponent)


@dataclass
class TurnEntry:
    """Log entry for one completed half-turn; the unit of replay."""

    team: Team
    non_king_move: MoveAction
    king_move: MoveAction
    belief: tuple[float, ...]
    true_opponent_king: int
    score_delta: float


class GameState:
    """Mutable ground-truth state of one game. Confined to one thread."""

    def __init__(self, config: GameConfig, pieces: list[Piece], king_starts: dict[Team, int]):
        self.config = config
        self.geometry: BoardGeometry = geometry(config.board_size)
        self.pieces = pieces
        self.king_starts = dict(king_starts)
        self.turn_index = 0  # 0-based half-turn counter
        self.phase = TurnPhase.NON_KING_MOVE
        self.scores: dict[Team, float] = {Team.WHITE: 0.0, Team.BLACK: 0.0}
        self.turn_log: list[TurnEntry] = []
        self.history: dict[Team, list[PlayerObservation]] = {}
        self._pending_moves: list[MoveAction] = []

        self.board: list[Piece | None] = [None] * self.geometry.num_squares
        self.occupied = 0
        self.pawn_masks: dict[Team, int] = {Team.WHITE: 0, Team.BLACK: 0}
        self.kings: dict[Team, Piece] = {}
        for piece in pieces:
            if self.board[piece.square] is not None:
                raise RulesError(f"two pieces on {square_name(piece.square, config.board_size)}")
            self.board[piece.square] = piece
            self.occupied |= 1 << piece.square
            if piece.kind is PieceKind.PAWN:
                self.pawn_masks[piece.team] |= 1 << piece.square
            if piece.kind is PieceKind.KING:
                if piece.team in self.kings:
                    raise RulesError(f"{piece.team} has two kings")
                self.kings[piece.team] = piece
        for team in (Team.WHITE, Team.BLACK):
            if team not in self.kings:
                raise RulesError(f"{team} has no king")

        self.history = {t: [observe(self, t)] for t in (Team.WHITE, Team.BLACK)}

    @property
    def current_team(self) -> Team:
        return Team.WHITE if self.turn_index % 2 == 0 else Team.BLACK

    @property
    def half_turn_limit(self) -> int:
        return 2 * self.config.turns_per_side

    @property
    def game_over(self) -> bool:
        return self.turn_index >= self.half_turn_limit

    def own_completed_turns(self, team: Team) -> int:
        """Turns ``team`` has fully played (0 before its first inference)."""
        done = len(self.turn_log)
        return (done + 1) // 2 if team is Team.WHITE else done // 2


def new_game(config: GameConfig) -> GameState:
    """Place the rosters, draw each king uniformly among its candidates
    (via the config seed's placement stream), and hand the move to White."""
    rng = game_stream(config.seed, STREAM_PLACEMENT)
    pieces: list[Piece] = []
    king_starts: dict[Team, int] = {}
    for team in (Team.WHITE, Team.BLACK):
        for kind, sq in config.rosters[team]:
            pieces.append(Piece(kind, team, sq))
    for team in (Team.WHITE, Team.BLACK):
        candidates = config.king_candidates[team]
        choice = int(rng.integers(len(candidates)))
        king_starts[team] = candidates[choice]
        pieces.append(Piece(PieceKind.KING, team, candidates[choice]))
    return GameState(config, pieces, king_starts)


def restore_game(config: GameConfig, king_starts: dict[Team, int]) -> GameState:
    """Rebuild the initial state from explicit king squares (replay path)."""
    pieces = [
        Piece(kind, team, sq)
        for team in (Team.WHITE, Team.BLACK)
        for kind, sq in config.rosters[team]
    ]
    for team in (Team.WHITE, Team.BLACK):
        sq = king_starts[team]
        if sq not in config.king_candidates[team]:
            raise RulesError(f"{team} king start {sq} is not a configured candidate")
        pieces.append(Piece(PieceKind.KING, team, sq))
    return GameState(config, pieces, king_starts)


def visibility_mask(state: GameState, team: Team) -> int:
    """Union of per-piece visibility. Rays stop inclusively at any pawn,
    own or enemy; non-pawn pieces never occlude."""
    pawns = state.pawn_masks[Team.WHITE] | state.pawn_masks[Team.BLACK]
    geo = state.geometry
    mask = 0
    for piece in state.pieces:
        if piece.team is team:
            mask |= geo.piece_visibility(piece.kind, piece.square, pawns)
    return mask


def observe(state: GameState, team: Team, turn_index: int | None = None) -> PlayerObservation:
    visible = visibility_mask(state, team)
    seen = tuple(
        sorted(
            (
                (p.kind, p.team, p.square)
                for p in state.pieces
                if p.team is team or (visible >> p.square) & 1
            ),
            key=lambda entry: entry[2],
        )
    )
    if turn_index is None:
        turn_index = state.own_completed_turns(team)
    return PlayerObservation(viewer=team, visible=visible, seen=seen, turn_index=turn_index)


def legal_moves(state: GameState, team: Team, phase: TurnPhase) -> list[MoveAction]:
    """All one-square moves to unoccupied squares for the given phase, or a
    single forced pass when none exist. Deterministically ordered.

    Legality is fully determinable from the mover's own observation: every
    piece sees its Chebyshev-1 neighborhood, so adjacent occupancy is never
    hidden and no information leaks through this list.
    """
    if phase is TurnPhase.INFERENCE:
        raise SequencingError("inference phase has no movement actions")
    if state.game_over:
        raise SequencingError("game is over")
    if team is not state.current_team:
        raise SequencingError(f"it is not {team}'s half-turn")
    if phase is not state.phase:
        raise SequencingError(f"phase is {state.phase.value}, not {phase.value}")

    if phase is TurnPhase.KING_MOVE:
        movers = [state.kings[team]]
    else:
        movers = sorted(
            (p for p in state.pieces if p.team is team and p.kind is not PieceKind.KING),
            key=lambda p: p.square,
        )
    geo = state.geometry
    moves = []
    for piece in movers:
        free = geo.adjacent[piece.square] & ~state.occupied
        while free:
            low = free & -free
            moves.append(MoveAction(piece.kind, piece.square, low.bit_length() - 1))
            free ^= low
    if not moves:
        return [MoveAction.passing()]
    return moves


def _validate_move(state: GameState, action: MoveAction) -> Piece | None:
    team = state.current_team
    phase = state.phase
    if phase is TurnPhase.INFERENCE:
        raise SequencingError("expected an inference, not a move")
    if action.is_pass:
        if legal_moves(state, team, phase) != [MoveAction.passing()]:
            raise RulesError("pass submitted while legal moves exist")
        return None
    piece = state.board[action.from_sq] if 0 <= action.from_sq < state.geometry.num_squares else None
    if piece is None or piece.team is not team:
        raise RulesError(f"no {team} piece on {square_name(action.from_sq, state.config.board_size)}")
    if piece.kind is not action.piece:
        raise RulesError(f"piece on {square_name(action.from_sq, state.config.board_size)} is a {piece.kind}, not a {action.piece}")
    if phase is TurnPhase.KING_MOVE and piece.kind is not PieceKind.KING:
        raise RulesError("king-move phase requires moving the king")
    if phase is TurnPhase.NON_KING_MOVE and piece.kind is PieceKind.KING:
        raise RulesError("the king cannot move in the non-king phase")
    if not (0 <= action.to_sq < state.geometry.num_squares):
        raise RulesError("destination off the board")
    if chebyshev(action.from_sq, action.to_sq, state.config.board_size) != 1:
        raise RulesError("moves cover exactly one square in any direction")
    if (state.occupied >> action.to_sq) & 1:
        raise RulesError(f"destination {square_name(action.to_sq, state.config.board_size)} is occupied")
    return piece


def apply_move(state: GameState, action: MoveAction) -> GameState:
    """Apply a movement-phase action in place and advance the phase.

    Illegal actions raise RulesError and leave the state untouched. After
    the king move the mover's inference-point snapshot enters history.
    """
    if state.game_over:
        raise SequencingError("game is over")
    piece = _validate_move(state, action)
    team = state.current_team
    if piece is not None:
        bit_from, bit_to = 1 << action.from_sq, 1 << action.to_sq
        state.board[action.from_sq] = None
        state.board[action.to_sq] = piece
        state.occupied ^= bit_from | bit_to
        if piece.kind is PieceKind.PAWN:
            state.pawn_masks[team] ^= bit_from | bit_to
        piece.square = action.to_sq
    state._pending_moves.append(action)
    if state.phase is TurnPhase.NON_KING_MOVE:
        state.phase = TurnPhase.KING_MOVE
    else:
        state.phase = TurnPhase.INFERENCE
        snapshot = observe(state, team, state.own_completed_turns(team) + 1)
        state.history[team].append(snapshot)
    return state


def validate_belief(belief, num_squares: int) -> np.ndarray:
    probs = np.asarray(belief, dtype=np.float64)
    if probs.shape != (num_squares,):
        raise ValidationError(f"belief must have {num_squares} entries, got shape {probs.shape}")
    if not np.all(np.isfinite(probs)):
        raise ValidationError("belief contains non-finite entries")
    if np.any(probs < 0):
        raise ValidationError("belief contains negative mass")
    total = float(probs.sum())
    if abs(total - 1.0) > BELIEF_SUM_TOL:
        raise ValidationError(f"belief sums to {total!r}, not 1")
    return probs


def record_inference(state: GameState, team: Team, belief) -> float:
    """Score the submitted belief against the true opponent king square,
    close the half-turn, and pass control to the other side."""
    if state.game_over:
        raise SequencingError("game is over")
    if team is not state.current_team:
        raise SequencingError(f"it is not {team}'s half-turn")
    if state.phase is not TurnPhase.INFERENCE:
        raise SequencingError(f"phase is {state.phase.value}, not inference")
    probs = validate_belief(belief, state.geometry.num_squares)
    true_sq = state.kings[team.opponent].square
    delta = float(probs[true_sq])
    state.scores[team] += delta
    non_king, king = state._pending_moves
    state.turn_log.append(
        TurnEntry(
            team=team,
            non_king_move=non_king,
            king_move=king,
            belief=tuple(float(p) for p in probs),
            true_opponent_king=true_sq,
            score_delta=delta,
        )
    )
    state._pending_moves = []
    state.turn_index += 1
    state.phase = TurnPhase.NON_KING_MOVE
    return delta
