"""Observation encoding and viewer canonicalization.

Each observation becomes a (size, size, 6) tensor flattened C-order
(8x8x6 = 384 on the default board):

  channels 0-3  piece kind one-hot (pawn, rook, bishop, king) on squares
                with a seen piece
  channel 4     team: +1 own piece, -1 opponent piece, 0 empty
  channel 5     visibility: 1 visible, 0 fog

Before encoding, everything is canonicalized so the viewer always plays
as White: ranks are mirrored (rank -> size-1-rank), files kept, and team
signs swapped for a Black viewer. One model thus serves both colors.
"""

from __future__ import annotations

import numpy as np

from ..engine import PlayerObservation
from ..geometry import mask_to_bool_array
from ..types import Team

NUM_CHANNELS = 6
CH_TEAM = 4
CH_VISIBLE = 5


def canonical_square(sq: int, viewer: Team, size: int = 8) -> int:
    """Map a board square into the viewer's as-White frame (an involution)."""
    if viewer is Team.WHITE:
        return sq
    rank, file = divmod(sq, size)
    return (size - 1 - rank) * size + file


def decanonicalize_vector(values: np.ndarray, viewer: Team, size: int = 8) -> np.ndarray:
    """Map a per-square vector from the canonical frame back to the board frame."""
    if viewer is Team.WHITE:
        return values
    return values.reshape(size, size)[::-1].reshape(-1).copy()


def encode_observation(obs: PlayerObservation, size: int = 8) -> np.ndarray:
    grid = np.zeros((size, size, NUM_CHANNELS), dtype=np.float32)
    visible = mask_to_bool_array(obs.visible, size * size).reshape(size, size)
    if obs.viewer is Team.BLACK:
        visible = visible[::-1]
    grid[:, :, CH_VISIBLE] = visible
    for kind, team, sq in obs.seen:
        csq = canonical_square(sq, obs.viewer, size)
        rank, file = divmod(csq, size)
        grid[rank, file, int(kind)] = 1.0
        grid[rank, file, CH_TEAM] = 1.0 if team is obs.viewer else -1.0
    return grid.reshape(-1)


def encode_history(history: list[PlayerObservation], size: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """Stack a player's snapshots into (tokens, positions) model inputs.

    Positions are the observations' own-turn indices, which are strictly
    increasing by construction of the history.
    """
    tokens = np.stack([encode_observation(obs, size) for obs in history])
    positions = np.array([obs.turn_index for obs in history], dtype=np.int64)
    return tokens, positions


class HistoryEncoder:
    """Incremental history encoding: one game side, one encoder.

    Re-encoding a whole history at every decision is O(T^2) per game; this
    caches encoded tokens and only appends new snapshots.
    """

    def __init__(self, size: int = 8):
        self.size = size
        self._tokens: list[np.ndarray] = []
        self._positions: list[int] = []
        self._count = 0

    def reset(self) -> None:
        self._tokens.clear()
        self._positions.clear()
        self._count = 0

    def sync(self, history: list[PlayerObservation]) -> tuple[np.ndarray, np.ndarray]:
        if len(history) < self._count:
            self.reset()
        for obs in history[self._count:]:
            self._tokens.append(encode_observation(obs, self.size))
            self._positions.append(obs.turn_index)
        self._count = len(history)
        return np.stack(self._tokens), np.array(self._positions, dtype=np.int64)
