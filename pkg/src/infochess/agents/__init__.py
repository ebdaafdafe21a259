"""Agent construction from spec strings.

Spec strings: ``random | vismax | beliefmax | hidingvismax |
hidingbeliefmax | rl:<checkpoint-file>``. Learned agents need the belief
model bundle; the RL checkpoint must match its trunk hash.
"""

from __future__ import annotations

from ..beliefs.model import BeliefModel
from ..errors import ConfigError
from .base import Agent, LearnedBeliefs, RandomAgent
from .heuristics import (
    HeuristicAgent,
    compose_heuristic,
    greedy_infogain_choice,
    hiding_king_choice,
    hypothetical_visibility,
    information_gain_per_move,
)
from .play import play_game
from .rl import RLAgent, RLTrainConfig, load_rl_checkpoint, train_rl

HEURISTIC_KINDS = ("random", "vismax", "beliefmax", "hidingvismax", "hidingbeliefmax")


def make_agent(spec: str, belief_model: BeliefModel | None = None) -> Agent:
    spec = spec.strip()
    if spec in HEURISTIC_KINDS:
        needs_model = spec not in ("random", "vismax")
        if needs_model and belief_model is None:
            raise ConfigError(f"agent {spec!r} requires a belief model (--belief-model)")
        return compose_heuristic(spec, belief_model)
    if spec.startswith("rl:"):
        path = spec[3:]
        if not path:
            raise ConfigError("rl agent spec must name a checkpoint: rl:<file>")
        if belief_model is None:
            raise ConfigError("rl agents require a belief model (--belief-model)")
        scorer = load_rl_checkpoint(path, belief_model)
        return RLAgent(belief_model, scorer)
    raise ConfigError(f"unknown agent spec {spec!r}")


__all__ = [
    "Agent",
    "HeuristicAgent",
    "HEURISTIC_KINDS",
    "LearnedBeliefs",
    "RandomAgent",
    "RLAgent",
    "RLTrainConfig",
    "compose_heuristic",
    "greedy_infogain_choice",
    "hiding_king_choice",
    "hypothetical_visibility",
    "information_gain_per_move",
    "make_agent",
    "play_game",
    "train_rl",
]
