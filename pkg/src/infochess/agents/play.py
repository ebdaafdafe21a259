"""Drive one full game between two agents.

The loop owns the phase choreography and keeps agents on the observation
side of the fog: each decision sees only the player's snapshot, legal
moves, and own history. Optionally emits per-inference metric samples.
"""

from __future__ import annotations

from typing import Callable

from ..config import GameConfig
from ..engine import GameState, apply_move, legal_moves, new_game, observe, record_inference
from ..infotheory import (
    HIDDEN,
    FogPartition,
    MetricSample,
    belief_entropy,
    observer_cross_entropy_sample,
    oracle_cross_entropy_sample,
)
from ..rng import STREAM_BLACK_AGENT, STREAM_WHITE_AGENT, game_stream
from ..types import Team, TurnPhase
from .base import Agent


def play_game(
    white: Agent,
    black: Agent,
    config: GameConfig,
    collect_metrics: bool = False,
    inference_hook: Callable[[GameState, Team], None] | None = None,
) -> tuple[GameState, list[MetricSample]]:
    """Play one game to completion. Returns the final state and, when
    requested, one MetricSample per (team, turn).

    ``inference_hook(state, team)`` fires at each inference point, after
    the king move and before the belief is scored (dataset labeling).
    """
    state = new_game(config)
    agents = {Team.WHITE: white, Team.BLACK: black}
    white.start_game(Team.WHITE, config, game_stream(config.seed, STREAM_WHITE_AGENT))
    black.start_game(Team.BLACK, config, game_stream(config.seed, STREAM_BLACK_AGENT))
    num_squares = state.geometry.num_squares
    samples: list[MetricSample] = []

    while not state.game_over:
        team = state.current_team
        agent = agents[team]
        history = state.history[team]
        obs0 = observe(state, team)
        prior = agent.prior_belief(obs0, history) if collect_metrics else None

        moves = legal_moves(state, team, TurnPhase.NON_KING_MOVE)
        apply_move(state, agent.choose_non_king(obs0, moves, history))
        king_moves = legal_moves(state, team, TurnPhase.KING_MOVE)
        apply_move(state, agent.choose_king(king_moves, history, obs0))

        obs1 = state.history[team][-1]
        if inference_hook is not None:
            inference_hook(state, team)
        belief = agent.inference_belief(obs1, state.history[team])
        delta = record_inference(state, team, belief)

        if collect_metrics:
            entry = state.turn_log[-1]
            partition = FogPartition.from_visible(obs1.visible, num_squares)
            king_sq = obs1.opponent_king_square
            realized = HIDDEN if king_sq is None else king_sq
            samples.append(
                MetricSample(
                    turn=obs1.turn_index,
                    team=team,
                    score_delta=delta,
                    belief_entropy=belief_entropy(entry.belief),
                    oracle_ce=oracle_cross_entropy_sample(entry.belief, entry.true_opponent_king),
                    observer_ce=observer_cross_entropy_sample(prior, partition, realized),
                )
            )
    return state, samples
