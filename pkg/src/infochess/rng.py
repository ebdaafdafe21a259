"""Deterministic stream derivation.

Every random draw in the package flows from numpy ``SeedSequence`` trees so
that experiments are pure functions of their seeds: a game derives named
child streams (king placement, White agent, Black agent) from its config
seed, and an experiment derives per-game seeds from (experiment seed,
game index). Parallel or reordered execution cannot change results.
"""

from __future__ import annotations

import numpy as np

STREAM_PLACEMENT = 0
STREAM_WHITE_AGENT = 1
STREAM_BLACK_AGENT = 2


def game_stream(seed: int, stream_id: int) -> np.random.Generator:
    """One of a game's named independent streams."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream_id,)))


def derive_game_seed(experiment_seed: int, game_index: int) -> int:
    """64-bit seed for game ``game_index`` within an experiment."""
    ss = np.random.SeedSequence(experiment_seed, spawn_key=(game_index,))
    return int(ss.generate_state(1, np.uint64)[0])


def derive_seed(seed: int, *path: int) -> int:
    """Generic child-seed derivation for auxiliary consumers (torch, etc.)."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(path))
    return int(ss.generate_state(1, np.uint64)[0])
