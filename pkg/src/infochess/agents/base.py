"""Agent interface and shared machinery.

An agent is bound to one side of one game via ``start_game`` and is then
driven through the three phase decisions. Agents only ever receive their
own observations and history, never ground truth; legal move lists leak
nothing because Chebyshev-1 neighborhoods are always visible.
"""

from __future__ import annotations

import numpy as np
import torch

from ..beliefs.encoding import HistoryEncoder, decanonicalize_vector
from ..beliefs.model import BeliefModel
from ..beliefs.uniform import uniform_belief
from ..config import GameConfig
from ..engine import PlayerObservation
from ..errors import ModelError
from ..types import MoveAction, Team


def pick(rng: np.random.Generator, items: list):
    return items[int(rng.integers(len(items)))]


class Agent:
    kind: str = "agent"

    def start_game(self, team: Team, config: GameConfig, rng: np.random.Generator) -> None:
        self.team = team
        self.config = config
        self.rng = rng
        self._reset()

    def _reset(self) -> None:
        pass

    def prior_belief(self, obs: PlayerObservation, history) -> np.ndarray:
        raise NotImplementedError

    def choose_non_king(self, obs: PlayerObservation, legal: list[MoveAction], history) -> MoveAction:
        raise NotImplementedError

    def choose_king(self, legal: list[MoveAction], history, obs: PlayerObservation) -> MoveAction:
        raise NotImplementedError

    def inference_belief(self, obs: PlayerObservation, history) -> np.ndarray:
        raise NotImplementedError


class RandomAgent(Agent):
    """Uniform random moves, uniform belief."""

    kind = "random"

    def prior_belief(self, obs, history):
        return uniform_belief(obs, self.config.board_size**2)

    def choose_non_king(self, obs, legal, history):
        return pick(self.rng, legal)

    def choose_king(self, legal, history, obs):
        return pick(self.rng, legal)

    def inference_belief(self, obs, history):
        return uniform_belief(obs, self.config.board_size**2)


class LearnedBeliefs:
    """Per-game cache around a BeliefModel for one side's history.

    Both heads come from a single trunk forward; results are cached by
    history length, which only grows within a game. The forward runs under
    no_grad (not inference_mode) so the representation can feed an RL
    scorer inside an autograd graph.
    """

    def __init__(self, model: BeliefModel):
        self.model = model
        self.encoder = HistoryEncoder(model.board_size)
        self._cache: dict[int, tuple[torch.Tensor, np.ndarray, np.ndarray]] = {}

    def reset(self) -> None:
        self.encoder.reset()
        self._cache.clear()

    def _forward(self, history) -> tuple[torch.Tensor, np.ndarray, np.ndarray]:
        key = len(history)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        tokens, positions = self.encoder.sync(history)
        self.model.eval()
        with torch.no_grad():
            t = torch.from_numpy(tokens).unsqueeze(0)
            p = torch.from_numpy(positions).unsqueeze(0)
            rep = self.model.encode_last(t, p)
            king_logits = self.model.king_head(rep)[0]
            vis_logits = self.model.visibility_head(rep)[0]
        if not (torch.isfinite(king_logits).all() and torch.isfinite(vis_logits).all()):
            raise ModelError("belief model produced non-finite logits")
        entry = (
            rep[0],
            torch.softmax(king_logits.double(), dim=-1).numpy(),
            torch.sigmoid(vis_logits.double()).numpy(),
        )
        self._cache[key] = entry
        return entry

    def representation(self, history) -> torch.Tensor:
        return self._forward(history)[0]

    def king_belief_board(self, obs: PlayerObservation, history, viewer: Team) -> np.ndarray:
        """Operational king belief: one-hot when the king is visible in
        ``obs``, otherwise the model's distribution in the board frame."""
        king_sq = obs.opponent_king_square
        if king_sq is not None:
            probs = np.zeros(self.model.num_squares, dtype=np.float64)
            probs[king_sq] = 1.0
            return probs
        canonical = self._forward(history)[1]
        return decanonicalize_vector(canonical, viewer, self.model.board_size)

    def visibility_board(self, history, viewer: Team) -> np.ndarray:
        canonical = self._forward(history)[2]
        return decanonicalize_vector(canonical, viewer, self.model.board_size)
