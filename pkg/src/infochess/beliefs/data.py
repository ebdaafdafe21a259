"""Training data for the belief heads: generation, expansion, storage.

Games are played by per-game random mixtures of Random and VisMax agents
(each side independently plays Random with probability p, p drawn
uniformly per game). Every inference point of every player yields one
training example: the player's history up to and including that point,
the ground-truth opponent king square, and the opponent's current
visibility mask, all in the player's canonical frame.

The dataset file is JSONL with one line per (game, player) trajectory;
examples are prefix expansions of trajectories, so storing trajectories
avoids writing each history prefix ~13 times over.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..config import GameConfig
from ..engine import PlayerObservation, visibility_mask
from ..geometry import mask_to_bool_array
from ..rng import derive_game_seed
from ..types import PieceKind, Team, parse_square, square_name
from .encoding import CH_TEAM, CH_VISIBLE, canonical_square, encode_observation


@dataclass
class TrainingExample:
    tokens: np.ndarray  # (T, size*size*6) encoded history, canonical frame
    positions: np.ndarray  # (T,) own-turn indices
    true_king: int  # canonical square of the opponent king
    true_visibility: np.ndarray  # (size*size,) 0/1, canonical frame

    @property
    def turn(self) -> int:
        return int(self.positions[-1])


@dataclass
class Trajectory:
    """One player's view of one game plus per-inference-point labels
    (board frame; canonicalized when expanded into examples)."""

    game_index: int
    team: Team
    observations: list[PlayerObservation]
    king_labels: list[int]
    visibility_labels: list[int]  # opponent visibility masks


def example_king_visible(example: TrainingExample, size: int = 8) -> bool:
    grid = example.tokens[-1].reshape(size, size, 6)
    return bool(((grid[:, :, int(PieceKind.KING)] == 1) & (grid[:, :, CH_TEAM] == -1)).any())


def example_fog_size(example: TrainingExample, size: int = 8) -> int:
    grid = example.tokens[-1].reshape(size, size, 6)
    return int(size * size - grid[:, :, CH_VISIBLE].sum())


def generate_trajectories(
    n_games: int, seed: int, config: GameConfig = GameConfig()
) -> list[Trajectory]:
    """Play the generation games and collect labeled trajectories."""
    from ..agents.heuristics import compose_heuristic
    from ..agents.play import play_game

    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0,)))
    trajectories: list[Trajectory] = []
    for game_index in range(n_games):
        p_random = rng.random()
        kinds = ["random" if rng.random() < p_random else "vismax" for _ in range(2)]
        game_seed = derive_game_seed(seed, game_index)
        labels: dict[Team, list[tuple[int, int]]] = {Team.WHITE: [], Team.BLACK: []}

        def hook(state, team):
            labels[team].append(
                (state.kings[team.opponent].square, visibility_mask(state, team.opponent))
            )

        state, _ = play_game(
            compose_heuristic(kinds[0]),
            compose_heuristic(kinds[1]),
            config.with_seed(game_seed),
            inference_hook=hook,
        )
        for team in (Team.WHITE, Team.BLACK):
            trajectories.append(
                Trajectory(
                    game_index=game_index,
                    team=team,
                    observations=list(state.history[team]),
                    king_labels=[k for k, _ in labels[team]],
                    visibility_labels=[v for _, v in labels[team]],
                )
            )
    return trajectories


def trajectory_examples(traj: Trajectory, size: int = 8) -> list[TrainingExample]:
    tokens = np.stack([encode_observation(obs, size) for obs in traj.observations])
    positions = np.array([obs.turn_index for obs in traj.observations], dtype=np.int64)
    examples = []
    for k in range(1, len(traj.observations)):
        vis = mask_to_bool_array(traj.visibility_labels[k - 1], size * size).reshape(size, size)
        if traj.team is Team.BLACK:
            vis = vis[::-1]
        examples.append(
            TrainingExample(
                tokens=tokens[: k + 1],
                positions=positions[: k + 1],
                true_king=canonical_square(traj.king_labels[k - 1], traj.team, size),
                true_visibility=vis.reshape(-1).astype(np.float32),
            )
        )
    return examples


def generate_training_games(
    n_games: int, seed: int, config: GameConfig = GameConfig()
) -> list[TrainingExample]:
    """One TrainingExample per inference point per player over n_games."""
    examples: list[TrainingExample] = []
    for traj in generate_trajectories(n_games, seed, config):
        examples.extend(trajectory_examples(traj, config.board_size))
    return examples


def _obs_to_json(obs: PlayerObservation, size: int) -> dict:
    return {
        "turn": obs.turn_index,
        "visible": format(obs.visible, "x"),
        "seen": [[str(k), str(t), square_name(sq, size)] for k, t, sq in obs.seen],
    }


def _obs_from_json(data: dict, viewer: Team, size: int) -> PlayerObservation:
    return PlayerObservation(
        viewer=viewer,
        visible=int(data["visible"], 16),
        seen=tuple(
            (PieceKind[k.upper()], Team[t.upper()], parse_square(sq, size))
            for k, t, sq in data["seen"]
        ),
        turn_index=int(data["turn"]),
    )


def save_trajectories(trajectories: list[Trajectory], path, size: int = 8) -> None:
    with open(path, "w") as fh:
        for traj in trajectories:
            fh.write(
                json.dumps(
                    {
                        "game": traj.game_index,
                        "team": str(traj.team),
                        "observations": [_obs_to_json(o, size) for o in traj.observations],
                        "king_labels": [square_name(sq, size) for sq in traj.king_labels],
                        "visibility_labels": [format(m, "x") for m in traj.visibility_labels],
                    }
                )
                + "\n"
            )


def load_trajectories(path, size: int = 8) -> list[Trajectory]:
    trajectories = []
    with open(path) as fh:
        for line in fh:
            if not line.strip():
                continue
            data = json.loads(line)
            team = Team[data["team"].upper()]
            trajectories.append(
                Trajectory(
                    game_index=int(data["game"]),
                    team=team,
                    observations=[_obs_from_json(o, team, size) for o in data["observations"]],
                    king_labels=[parse_square(sq, size) for sq in data["king_labels"]],
                    visibility_labels=[int(m, 16) for m in data["visibility_labels"]],
                )
            )
    return trajectories


def split_by_game(
    trajectories: list[Trajectory], validation_fraction: float = 0.1
) -> tuple[list[Trajectory], list[Trajectory]]:
    """Deterministic 90/10 train/validation split, whole games together."""
    games = sorted({t.game_index for t in trajectories})
    stride = max(2, round(1 / validation_fraction)) if validation_fraction > 0 else 0
    validation_games = {g for i, g in enumerate(games) if stride and i % stride == stride - 1}
    train = [t for t in trajectories if t.game_index not in validation_games]
    val = [t for t in trajectories if t.game_index in validation_games]
    return train, val
