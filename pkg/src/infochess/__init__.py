"""InfoChess: a symmetric adversarial-inference chess variant.

Players never capture; they score each turn by the probability mass their
belief places on the true opponent king square. This package provides the
deterministic rules engine, belief models, information-theoretic metrics,
heuristic and RL agents, an experiment harness, and a human-play service.
"""

__version__ = "0.1.0"

from .config import GameConfig
from .engine import (
    GameState,
    PlayerObservation,
    apply_move,
    legal_moves,
    new_game,
    observe,
    record_inference,
    visibility_mask,
)
from .types import MoveAction, PieceKind, Team, TurnPhase

__all__ = [
    "GameConfig",
    "GameState",
    "PlayerObservation",
    "MoveAction",
    "PieceKind",
    "Team",
    "TurnPhase",
    "apply_move",
    "legal_moves",
    "new_game",
    "observe",
    "record_inference",
    "visibility_mask",
    "__version__",
]
