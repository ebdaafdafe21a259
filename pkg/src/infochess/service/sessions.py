"""Session management for interactive play against a server-side agent.

One session owns one game and one agent. The human submits moves and
inferences; agent half-turns are resolved server-side between human
inputs. Sessions expire after an idle timeout; operations on expired or
unknown sessions raise SessionGoneError.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field

import numpy as np

from ..agents import Agent, make_agent
from ..beliefs.model import BeliefModel
from ..config import GameConfig
from ..engine import (
    GameState,
    apply_move,
    legal_moves,
    new_game,
    observe,
    record_inference,
)
from ..errors import RulesError, SequencingError, SessionGoneError, ValidationError
from ..rng import STREAM_BLACK_AGENT, STREAM_WHITE_AGENT, game_stream
from ..types import MoveAction, Team, TurnPhase, parse_square

DEFAULT_IDLE_TIMEOUT = 1800.0  # 30 minutes


@dataclass
class Session:
    id: str
    state: GameState
    human_team: Team
    agent: Agent
    agent_spec: str
    created_at: float
    last_access: float
    last_human_delta: float | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def agent_team(self) -> Team:
        return self.human_team.opponent


class SessionManager:
    def __init__(
        self,
        belief_model: BeliefModel | None = None,
        blind: bool = False,
        idle_timeout: float = DEFAULT_IDLE_TIMEOUT,
        default_config: GameConfig | None = None,
        now_fn=time.monotonic,
    ):
        self.belief_model = belief_model
        self.blind = blind
        self.idle_timeout = idle_timeout
        self.default_config = default_config or GameConfig()
        self.now = now_fn
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    # -- lifecycle ---------------------------------------------------------

    def create_session(
        self,
        agent_spec: str,
        human_team: str = "random",
        seed: int | None = None,
    ) -> Session:
        agent = make_agent(agent_spec, self.belief_model)
        if seed is None:
            seed = int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
        config = self.default_config.with_seed(seed)
        if human_team == "random":
            team = Team(int(np.random.default_rng(
                np.random.SeedSequence(seed, spawn_key=(3,))
            ).integers(2)))
        else:
            team = Team[human_team.upper()]
        state = new_game(config)
        stream = STREAM_WHITE_AGENT if team is Team.BLACK else STREAM_BLACK_AGENT
        agent.start_game(team.opponent, config, game_stream(seed, stream))
        now = self.now()
        session = Session(
            id=uuid.uuid4().hex,
            state=state,
            human_team=team,
            agent=agent,
            agent_spec=agent_spec,
            created_at=now,
            last_access=now,
        )
        if state.current_team is session.agent_team:
            self._agent_half_turn(session)
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is not None and self.now() - session.last_access > self.idle_timeout:
                del self._sessions[session_id]
                session = None
            if session is None:
                raise SessionGoneError(f"session {session_id!r} does not exist or has expired")
            session.last_access = self.now()
            return session

    def drop_expired(self) -> int:
        with self._lock:
            now = self.now()
            dead = [k for k, s in self._sessions.items() if now - s.last_access > self.idle_timeout]
            for k in dead:
                del self._sessions[k]
            return len(dead)

    # -- game flow ---------------------------------------------------------

    def _agent_half_turn(self, session: Session) -> None:
        state = session.state
        team = session.agent_team
        agent = session.agent
        history = state.history[team]
        obs0 = observe(state, team)
        moves = legal_moves(state, team, TurnPhase.NON_KING_MOVE)
        apply_move(state, agent.choose_non_king(obs0, moves, history))
        king_moves = legal_moves(state, team, TurnPhase.KING_MOVE)
        apply_move(state, agent.choose_king(king_moves, history, obs0))
        obs1 = state.history[team][-1]
        belief = agent.inference_belief(obs1, state.history[team])
        record_inference(state, team, belief)

    def human_legal_moves(self, session: Session) -> list[MoveAction]:
        state = session.state
        if state.game_over:
            raise SequencingError("game is over")
        if state.current_team is not session.human_team:
            raise SequencingError("it is the agent's half-turn")
        if state.phase is TurnPhase.INFERENCE:
            raise SequencingError("an inference is due, not a move")
        return legal_moves(state, session.human_team, state.phase)

    def submit_move(self, session: Session, payload: dict) -> TurnPhase:
        """Apply the human's move; returns the phase now awaiting input."""
        state = session.state
        if state.game_over:
            raise SequencingError("game is over")
        if state.current_team is not session.human_team:
            raise SequencingError("it is the agent's half-turn")
        phase = state.phase
        if "phase" in payload and payload["phase"] != phase.value:
            raise SequencingError(f"phase is {phase.value}, not {payload['phase']}")
        size = state.config.board_size
        if payload.get("pass"):
            action = MoveAction.passing()
        else:
            if "from" not in payload or "to" not in payload:
                raise ValidationError("move needs 'from' and 'to' squares (or pass)")
            from_sq = parse_square(str(payload["from"]), size)
            to_sq = parse_square(str(payload["to"]), size)
            piece = state.board[from_sq]
            if piece is None or piece.team is not session.human_team:
                raise RulesError(f"you have no piece on {payload['from']}")
            action = MoveAction(piece.kind, from_sq, to_sq)
        apply_move(state, action)
        return state.phase

    def submit_inference(self, session: Session, payload: dict) -> float:
        """Score the human's belief; then resolve the agent's half-turn.
        Returns the human's score delta."""
        state = session.state
        if state.game_over:
            raise SequencingError("game is over")
        if state.current_team is not session.human_team:
            raise SequencingError("it is the agent's half-turn")
        n = state.geometry.num_squares
        if "single_square" in payload and payload["single_square"] is not None:
            belief = np.zeros(n)
            belief[parse_square(str(payload["single_square"]), state.config.board_size)] = 1.0
        elif "belief" in payload and payload["belief"] is not None:
            belief = np.asarray(payload["belief"], dtype=np.float64)
        else:
            raise ValidationError("inference needs 'belief' (64 floats) or 'single_square'")
        delta = record_inference(state, session.human_team, belief)
        session.last_human_delta = delta
        if not state.game_over and state.current_team is session.agent_team:
            self._agent_half_turn(session)
        return delta
