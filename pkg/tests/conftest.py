import sys
from pathlib import Path

import numpy as np
import pytest
import torch

sys.path.insert(0, str(Path(__file__).parent))

from infochess.agents.heuristics import compose_heuristic
from infochess.agents.play import play_game
from infochess.config import GameConfig
from infochess.engine import GameState, apply_move, legal_moves, new_game
from infochess.types import Team, TurnPhase

torch.set_num_threads(1)


def random_playout(seed: int, half_turns: int, config: GameConfig | None = None) -> GameState:
    """A random reachable state: play random half-turns from a fresh game."""
    config = (config or GameConfig()).with_seed(seed)
    state = new_game(config)
    rng = np.random.default_rng(seed)
    for _ in range(min(half_turns, state.half_turn_limit)):
        team = state.current_team
        for phase in (TurnPhase.NON_KING_MOVE, TurnPhase.KING_MOVE):
            moves = legal_moves(state, team, phase)
            apply_move(state, moves[int(rng.integers(len(moves)))])
        belief = np.full(state.geometry.num_squares, 1.0 / state.geometry.num_squares)
        from infochess.engine import record_inference

        record_inference(state, team, belief)
    return state


@pytest.fixture
def default_config():
    return GameConfig(seed=0)


@pytest.fixture(scope="session")
def tiny_trained_model():
    """A briefly trained belief model for wiring tests (not for quality)."""
    from infochess.beliefs.data import generate_training_games
    from infochess.beliefs.training import train_belief_models

    examples = generate_training_games(12, seed=2024)
    model, _ = train_belief_models(examples, epochs=2, seed=5)
    return model


@pytest.fixture(scope="session")
def random_vs_random_state():
    state, _ = play_game(
        compose_heuristic("random"), compose_heuristic("random"), GameConfig(seed=77)
    )
    return state
