"""Experiment orchestration: matches, matchup matrices, per-turn curves,
movement allocation, and the command-line entry point."""

from .match import MatchupSpec, run_match
from .experiments import (
    MatchupResult,
    MovementAllocation,
    run_matchup_matrix,
    run_movement_allocation,
    run_per_turn_curves,
)

__all__ = [
    "MatchupSpec",
    "MatchupResult",
    "MovementAllocation",
    "run_match",
    "run_matchup_matrix",
    "run_movement_allocation",
    "run_per_turn_curves",
]
