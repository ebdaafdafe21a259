"""The uniform opponent-king belief: all fog squares equally likely.

Memoryless by design: if the king was seen and then slipped back into fog,
every fogged square gets the same mass regardless of distance. A visible
king collapses the belief to one-hot, as for every agent.
"""

from __future__ import annotations

import numpy as np

from ..engine import PlayerObservation
from ..errors import ValidationError
from ..geometry import mask_to_bool_array


def uniform_belief(obs: PlayerObservation, num_squares: int = 64) -> np.ndarray:
    king_sq = obs.opponent_king_square
    probs = np.zeros(num_squares, dtype=np.float64)
    if king_sq is not None:
        probs[king_sq] = 1.0
        return probs
    fog = ~mask_to_bool_array(obs.visible, num_squares)
    n_fog = int(fog.sum())
    if n_fog == 0:
        raise ValidationError("no fogged squares, yet the opponent king is not visible")
    probs[fog] = 1.0 / n_fog
    return probs
