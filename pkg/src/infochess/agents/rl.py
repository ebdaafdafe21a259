"""The RL agent: a move scorer on the frozen belief trunk, plus REINFORCE.

For each candidate move the trunk representation of the player's history
is concatenated with an 8-dim move vector ((x0, y0, x1, y1) normalized to
[0,1] in the canonical frame, then a 4-way piece one-hot) and scored by a
small MLP; the same MLP scores both phases. Moves are sampled from the
softmax over scores. Inference uses the same learned king belief as
BeliefMax.

Training is REINFORCE on per-turn score differentials (own inference gain
minus the opponent's same-numbered turn), undiscounted returns minus a
per-turn batch-mean baseline, plus an entropy bonus whose coefficient
anneals linearly over episodes. The trunk is never updated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import torch
from torch import nn

from .. import __version__ as ENGINE_VERSION
from ..beliefs.model import D_MODEL, BeliefModel, trunk_hash
from ..config import GameConfig
from ..errors import ConfigError, ModelError
from ..rng import derive_game_seed, derive_seed
from ..types import MoveAction, Team
from .base import Agent, LearnedBeliefs
from .heuristics import compose_heuristic
from .play import play_game

MOVE_FEATURE_DIM = 8  # (x0, y0, x1, y1) + piece one-hot(4)

ENTROPY_COEF_START = 5e-2
ENTROPY_COEF_END = 5e-3
PAPER_SCALE_EPISODES = 45_000

DEFAULT_MIXTURE = (
    ("selfplay", 0.30),
    ("random", 0.05),
    ("vismax", 0.15),
    ("beliefmax", 0.15),
    ("hidingvismax", 0.15),
    ("hidingbeliefmax", 0.20),
)


class MoveScorer(nn.Module):
    """(trunk representation ++ move vector) -> scalar score."""

    def __init__(self, d_model: int = D_MODEL, hidden: int = 128):
        super().__init__()
        self.net = nn.Sequential(
            nn.Linear(d_model + MOVE_FEATURE_DIM, hidden),
            nn.ReLU(),
            nn.Linear(hidden, 1),
        )
        # the move vector's 8 inputs are outnumbered 16:1 by representation
        # dims; scale their first-layer columns so both contribute
        # comparable variance and piece/direction preferences are driven by
        # reward signal rather than initialization drift
        with torch.no_grad():
            self.net[0].weight[:, d_model:] *= 4.0

    def forward(self, x):
        return self.net(x).squeeze(-1)


def move_features(moves: list[MoveAction], viewer: Team, size: int) -> np.ndarray:
    """Move vectors in the viewer's canonical (as-White) frame."""
    denom = float(size - 1)
    out = np.zeros((len(moves), MOVE_FEATURE_DIM), dtype=np.float32)
    for i, move in enumerate(moves):
        r0, f0 = divmod(move.from_sq, size)
        r1, f1 = divmod(move.to_sq, size)
        if viewer is Team.BLACK:
            r0, r1 = size - 1 - r0, size - 1 - r1
        out[i, 0] = f0 / denom
        out[i, 1] = r0 / denom
        out[i, 2] = f1 / denom
        out[i, 3] = r1 / denom
        out[i, 4 + int(move.piece)] = 1.0
    return out


def entropy_coefficient(episode: int, total_episodes: int) -> float:
    """Linear anneal: ENTROPY_COEF_START at episode 0 down to
    ENTROPY_COEF_END at the final episode."""
    if total_episodes <= 1:
        return ENTROPY_COEF_END
    frac = episode / (total_episodes - 1)
    return (1.0 - frac) * ENTROPY_COEF_START + frac * ENTROPY_COEF_END


class RLAgent(Agent):
    kind = "rl"

    def __init__(
        self,
        model: BeliefModel,
        scorer: MoveScorer,
        temperature: float = 1.0,
        train_mode: bool = False,
    ):
        self.learned = LearnedBeliefs(model)
        self.scorer = scorer
        self.temperature = temperature
        self.train_mode = train_mode
        self.episode_steps: list[tuple] = []
        self._pending = None

    def _reset(self):
        self.learned.reset()
        self.episode_steps = []
        self._pending = None

    def _decide(self, legal: list[MoveAction], history):
        """Sample a move from the softmax over scores. Returns
        (action, log_prob, entropy); a lone action is certain."""
        if len(legal) == 1:
            return legal[0], torch.tensor(0.0), torch.tensor(0.0)
        feats = move_features(legal, self.team, self.config.board_size)
        rep = self.learned.representation(history)
        inputs = torch.cat(
            [rep.unsqueeze(0).expand(len(legal), -1), torch.from_numpy(feats)], dim=1
        )
        if self.train_mode:
            logits = self.scorer(inputs) / self.temperature
        else:
            with torch.no_grad():
                logits = self.scorer(inputs) / self.temperature
        log_probs = torch.log_softmax(logits, dim=0)
        probs = log_probs.detach().double().exp().numpy()
        probs /= probs.sum()
        idx = int(self.rng.choice(len(legal), p=probs))
        entropy = -(log_probs.exp() * log_probs).sum()
        return legal[idx], log_probs[idx], entropy

    def prior_belief(self, obs, history):
        return self.learned.king_belief_board(obs, history, self.team)

    def choose_non_king(self, obs, legal, history):
        action, logp, ent = self._decide(legal, history)
        if self.train_mode:
            self._pending = (logp, ent)
        return action

    def choose_king(self, legal, history, obs):
        action, logp, ent = self._decide(legal, history)
        if self.train_mode:
            nk_logp, nk_ent = self._pending
            self.episode_steps.append((nk_logp + logp, nk_ent + ent))
            self._pending = None
        return action

    def inference_belief(self, obs, history):
        return self.learned.king_belief_board(obs, history, self.team)


@dataclass(frozen=True)
class RLTrainConfig:
    """An episode is one REINFORCE update: a batch of ``batch_games`` full
    games against one opponent drawn from the mixture. Desk scale is 2,000
    episodes; PAPER_SCALE_EPISODES is the full-size run."""

    episodes: int = 2_000
    batch_games: int = 10
    lr: float = 3e-4
    opponent_mixture: tuple = field(default_factory=lambda: DEFAULT_MIXTURE)

    def __post_init__(self):
        total = sum(w for _, w in self.opponent_mixture)
        if abs(total - 1.0) > 1e-9:
            raise ConfigError(f"opponent mixture weights sum to {total}, not 1")
        if self.episodes < 1 or self.batch_games < 1:
            raise ConfigError("episodes and batch_games must be positive")


@dataclass
class RLGameResult:
    episode: int  # the update step this game belonged to
    opponent: str
    learner_team: Team
    learner_score: float
    opponent_score: float

    @property
    def won(self) -> bool | None:
        if self.learner_score == self.opponent_score:
            return None
        return self.learner_score > self.opponent_score


def _make_opponent(kind: str, model: BeliefModel, scorer: MoveScorer) -> Agent:
    if kind == "selfplay":
        return RLAgent(model, scorer, train_mode=False)
    return compose_heuristic(kind, model)


def train_rl(
    model: BeliefModel,
    train_config: RLTrainConfig = RLTrainConfig(),
    game_config: GameConfig = GameConfig(),
    seed: int = 0,
    progress=None,
) -> tuple[MoveScorer, list[RLGameResult]]:
    """REINFORCE over the opponent mixture. Returns the trained scorer and
    the per-game training curve."""
    torch.manual_seed(derive_seed(seed, 7))
    scorer = MoveScorer()
    learner = RLAgent(model, scorer, train_mode=True)
    optimizer = torch.optim.Adam(scorer.parameters(), lr=train_config.lr)
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(11,)))
    kinds = [k for k, _ in train_config.opponent_mixture]
    weights = np.array([w for _, w in train_config.opponent_mixture], dtype=np.float64)
    weights /= weights.sum()
    turns = game_config.turns_per_side
    results: list[RLGameResult] = []

    n_batches = train_config.episodes
    for batch in range(n_batches):
        coef = entropy_coefficient(batch, train_config.episodes)
        opponent_kind = kinds[int(rng.choice(len(kinds), p=weights))]
        opponent = _make_opponent(opponent_kind, model, scorer)
        batch_steps: list[list[tuple]] = []
        batch_returns = np.zeros((train_config.batch_games, turns))

        for g in range(train_config.batch_games):
            game_seed = derive_game_seed(seed, batch * train_config.batch_games + g)
            learner_team = Team.WHITE if rng.integers(2) == 0 else Team.BLACK
            if learner_team is Team.WHITE:
                state, _ = play_game(learner, opponent, game_config.with_seed(game_seed))
            else:
                state, _ = play_game(opponent, learner, game_config.with_seed(game_seed))
            own = np.array(
                [e.score_delta for e in state.turn_log if e.team is learner_team]
            )
            opp = np.array(
                [e.score_delta for e in state.turn_log if e.team is not learner_team]
            )
            rewards = own - opp  # same-numbered turns pair off
            batch_returns[g] = rewards[::-1].cumsum()[::-1]
            batch_steps.append(list(learner.episode_steps))
            results.append(
                RLGameResult(
                    episode=batch,
                    opponent=opponent_kind,
                    learner_team=learner_team,
                    learner_score=state.scores[learner_team],
                    opponent_score=state.scores[learner_team.opponent],
                )
            )

        baseline = batch_returns.mean(axis=0)
        loss = torch.tensor(0.0)
        for g, steps in enumerate(batch_steps):
            advantage = batch_returns[g] - baseline
            policy_term = sum(logp * float(advantage[t]) for t, (logp, _) in enumerate(steps))
            entropy_term = sum(ent for _, ent in steps)
            loss = loss + (-policy_term - coef * entropy_term)
        loss = loss / train_config.batch_games
        if not torch.isfinite(loss):
            raise ModelError(f"non-finite REINFORCE loss at episode {batch}")
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()
        if progress is not None:
            progress(batch, n_batches, results)
    return scorer, results


def save_rl_checkpoint(path, scorer: MoveScorer, model: BeliefModel, train_config: RLTrainConfig) -> None:
    state = {name: tensor.numpy() for name, tensor in scorer.state_dict().items()}
    manifest = {
        "engine_version": ENGINE_VERSION,
        "trunk_hash": trunk_hash(model),
        "layers": {name: list(arr.shape) for name, arr in state.items()},
        "train_config": {
            "episodes": train_config.episodes,
            "batch_games": train_config.batch_games,
            "lr": train_config.lr,
            "opponent_mixture": list(map(list, train_config.opponent_mixture)),
        },
    }
    np.savez(path, __manifest__=np.frombuffer(json.dumps(manifest).encode(), dtype=np.uint8), **state)


def load_rl_checkpoint(path, model: BeliefModel) -> MoveScorer:
    with np.load(path) as bundle:
        manifest = json.loads(bytes(bundle["__manifest__"]).decode())
        if manifest["trunk_hash"] != trunk_hash(model):
            raise ModelError("checkpoint was trained against a different trunk")
        scorer = MoveScorer()
        expected = {name: tuple(t.shape) for name, t in scorer.state_dict().items()}
        state = {}
        for name, shape in manifest["layers"].items():
            arr = bundle[name]
            if name not in expected or expected[name] != tuple(arr.shape):
                raise ModelError(f"scorer layer {name} does not fit this engine version")
            state[name] = torch.from_numpy(arr)
    scorer.load_state_dict(state)
    scorer.eval()
    return scorer
