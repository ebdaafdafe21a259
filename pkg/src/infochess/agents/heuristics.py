"""The heuristic agent grid: movement policies x belief models.

Non-king movement greedily maximizes expected information gain under the
agent's belief (uniform for VisMax, learned for BeliefMax); king movement
is either random or greedy concealment (move to the legal square with
minimal predicted opponent visibility). Ties are broken uniformly over
the exact argmax/argmin set.

Candidate fog partitions are hypothetical: the mover's own pieces with one
piece relocated, rays blocked by every pawn the mover knows about (own
pawns plus enemy pawns currently in view). Unseen opponent pieces cannot
be accounted for and are treated as absent.
"""

from __future__ import annotations

import math

import numpy as np

from ..beliefs.model import BeliefModel
from ..beliefs.uniform import uniform_belief
from ..engine import PlayerObservation
from ..errors import ConfigError
from ..geometry import geometry, mask_to_bool_array
from ..types import MoveAction, PieceKind, Team
from .base import Agent, LearnedBeliefs, RandomAgent, pick


def hypothetical_visibility(
    obs: PlayerObservation, moves: list[MoveAction], size: int
) -> list[int]:
    """Post-move visibility mask for each candidate move, from the mover's
    own view. Blockers are every pawn the mover knows about: all own pawns
    plus the enemy pawns currently in view. Moving a non-pawn only changes
    that piece's own contribution; moving one of the mover's pawns also
    shifts a blocker, so the own sliders' rays are recomputed."""
    geo = geometry(size)
    viewer = obs.viewer
    known_pawns = 0
    own: list[tuple[PieceKind, int]] = []
    for kind, team, sq in obs.seen:
        if team is viewer:
            own.append((kind, sq))
        if kind is PieceKind.PAWN:
            known_pawns |= 1 << sq
    masks = {sq: geo.piece_visibility(kind, sq, known_pawns) for kind, sq in own}
    union_without: dict[int, int] = {}
    for _, sq in own:
        other = 0
        for _, other_sq in own:
            if other_sq != sq:
                other |= masks[other_sq]
        union_without[sq] = other

    results = []
    for m in moves:
        if m.piece is PieceKind.PAWN:
            shifted = (known_pawns & ~(1 << m.from_sq)) | (1 << m.to_sq)
            visible = geo.piece_visibility(PieceKind.PAWN, m.to_sq, shifted)
            for kind, sq in own:
                if sq != m.from_sq:
                    if kind is PieceKind.ROOK or kind is PieceKind.BISHOP:
                        visible |= geo.piece_visibility(kind, sq, shifted)
                    else:
                        visible |= masks[sq]
        else:
            visible = union_without[m.from_sq] | geo.piece_visibility(
                m.piece, m.to_sq, known_pawns
            )
        results.append(visible)
    return results


def information_gain_per_move(
    obs: PlayerObservation, moves: list[MoveAction], belief: np.ndarray, size: int
) -> np.ndarray:
    """Expected information gain of each candidate move under ``belief``.

    Uses the identity  q_f H({q_x/q_f}) = sum_F(-q_x ln q_x) + q_f ln q_f
    so per-move work is two masked sums over the precomputed -q ln q terms.
    Sums run over sorted positive masses: moves whose fogged-mass multisets
    coincide (e.g. equal newly-visible counts under a uniform belief) tie
    bit-exactly, which the uniform argmax tie-break depends on.
    """
    n = size * size
    q = np.asarray(belief, dtype=np.float64)
    contrib = np.zeros(n)
    positive = q > 0
    contrib[positive] = -q[positive] * np.log(q[positive])
    h_prior = float(np.sort(contrib[positive]).sum())
    gains = np.empty(len(moves))
    for i, visible in enumerate(hypothetical_visibility(obs, moves, size)):
        fog = ~mask_to_bool_array(visible, n)
        masses = np.sort(q[fog & positive])
        if masses.size == 0:
            posterior = 0.0
        else:
            q_f = float(masses.sum())
            posterior = float(-(masses * np.log(masses)).sum()) + q_f * math.log(q_f)
        gains[i] = h_prior - posterior
    return gains


def greedy_infogain_choice(
    obs: PlayerObservation,
    legal: list[MoveAction],
    belief: np.ndarray,
    size: int,
    rng: np.random.Generator,
) -> MoveAction:
    """Uniform-random choice among the exact info-gain argmax set."""
    if len(legal) == 1:
        return legal[0]
    gains = information_gain_per_move(obs, legal, belief, size)
    best = gains.max()
    ties = [m for m, g in zip(legal, gains) if g == best]
    return pick(rng, ties)


def hiding_king_choice(
    visibility: np.ndarray, legal: list[MoveAction], rng: np.random.Generator
) -> MoveAction:
    """King destination with minimal predicted opponent visibility.

    Staying put is never a candidate; a pass only occurs when forced.
    """
    if len(legal) == 1:
        return legal[0]
    values = [float(visibility[m.to_sq]) for m in legal]
    best = min(values)
    ties = [m for m, v in zip(legal, values) if v == best]
    return pick(rng, ties)


class HeuristicAgent(Agent):
    """One row of the agent grid, wired from its policy/belief choices."""

    def __init__(self, kind: str, king_belief: str, king_policy: str, model: BeliefModel | None):
        self.kind = kind
        self.king_belief = king_belief  # "uniform" | "learned"
        self.king_policy = king_policy  # "random" | "hiding"
        self.model = model
        if (king_belief == "learned" or king_policy == "hiding") and model is None:
            raise ConfigError(f"agent {kind!r} requires a trained belief model")
        self.learned = LearnedBeliefs(model) if model is not None else None

    def _reset(self):
        if self.learned is not None:
            self.learned.reset()

    def _belief(self, obs: PlayerObservation, history) -> np.ndarray:
        if self.king_belief == "learned":
            return self.learned.king_belief_board(obs, history, self.team)
        return uniform_belief(obs, self.config.board_size**2)

    def prior_belief(self, obs, history):
        return self._belief(obs, history)

    def choose_non_king(self, obs, legal, history):
        belief = self._belief(obs, history)
        return greedy_infogain_choice(obs, legal, belief, self.config.board_size, self.rng)

    def choose_king(self, legal, history, obs):
        if self.king_policy == "hiding":
            visibility = self.learned.visibility_board(history, self.team)
            return hiding_king_choice(visibility, legal, self.rng)
        return pick(self.rng, legal)

    def inference_belief(self, obs, history):
        return self._belief(obs, history)


HEURISTIC_GRID = {
    # kind: (king_belief, king_policy)
    "vismax": ("uniform", "random"),
    "beliefmax": ("learned", "random"),
    "hidingvismax": ("uniform", "hiding"),
    "hidingbeliefmax": ("learned", "hiding"),
}


def compose_heuristic(kind: str, model: BeliefModel | None = None) -> Agent:
    if kind == "random":
        return RandomAgent()
    if kind not in HEURISTIC_GRID:
        raise ConfigError(f"unknown heuristic agent {kind!r}")
    king_belief, king_policy = HEURISTIC_GRID[kind]
    needs_model = king_belief == "learned" or king_policy == "hiding"
    return HeuristicAgent(kind, king_belief, king_policy, model if needs_model else None)
