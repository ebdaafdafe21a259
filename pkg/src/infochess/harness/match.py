"""Single-match driver: two agent specs, one seeded game, metrics out."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from ..agents import Agent, make_agent
from ..agents.play import play_game
from ..beliefs.model import BeliefModel
from ..config import GameConfig
from ..errors import InfoChessError
from ..infotheory import MetricSample
from ..record import GameRecord, record_from_state
from ..types import Team

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatchupSpec:
    agent_a: str
    agent_b: str
    n_games: int
    seed: int = 0
    color_policy: str = "random-split"  # or "fixed" (agent_a is always White)

    def __post_init__(self):
        if self.n_games < 1:
            raise ValueError("n_games must be at least 1")
        if self.color_policy not in ("random-split", "fixed"):
            raise ValueError(f"unknown color policy {self.color_policy!r}")


def run_match(
    agent_white: Agent,
    agent_black: Agent,
    config: GameConfig,
    game_seed: int,
) -> tuple[GameRecord, list[MetricSample]]:
    """Play one full game; returns its record and both sides' samples."""
    state, samples = play_game(
        agent_white, agent_black, config.with_seed(game_seed), collect_metrics=True
    )
    return record_from_state(state), samples


def run_match_with_specs(
    spec_white: str,
    spec_black: str,
    config: GameConfig,
    game_seed: int,
    belief_model: BeliefModel | None = None,
):
    white = make_agent(spec_white, belief_model)
    black = make_agent(spec_black, belief_model)
    return run_match(white, black, config, game_seed)


def safe_match(
    agent_white: Agent,
    agent_black: Agent,
    config: GameConfig,
    game_seed: int,
) -> tuple[GameRecord, list[MetricSample]] | None:
    """run_match, but an agent failure aborts the match as invalid rather
    than the whole experiment. Invalid matches are excluded upstream."""
    try:
        return run_match(agent_white, agent_black, config, game_seed)
    except InfoChessError as exc:
        log.warning("match aborted (seed %d): %s", game_seed, exc)
        return None


def team_of(samples: list[MetricSample], team: Team) -> list[MetricSample]:
    return [s for s in samples if s.team is team]
