"""Information-theoretic quantities over beliefs and fog partitions.

All logarithms are natural (nats). Inside metric logs only, probabilities
are floored at LOG_FLOOR so learned beliefs that zero out the realized
outcome still produce finite samples; the game's scoring itself is never
floored.

Core quantities, for a belief q over squares and an action whose fog
partition leaves the square set F fogged:

  fog mass          q_f = sum of q over F
  expected
  posterior entropy E[H_post] = q_f * H({q(x)/q_f : x in F}), 0 when q_f=0
                    (a visible king collapses the posterior to a delta;
                    a fogged king renormalizes the prior over F)
  information gain  dH = H(q) - E[H_post]  (never negative)

The observation pushforward coarsens q through the partition: one atom per
visible square plus a single "hidden" atom holding the fog mass. Sampling
-log of the realized outcome estimates the observer cross entropy, and the
data processing inequality bounds its KL term by the latent one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .geometry import mask_to_bool_array
from .types import Team

LOG_FLOOR = 1e-12
DIST_SUM_TOL = 1e-9

HIDDEN = "hidden"  # the single coarsened outcome for "king stayed fogged"


@dataclass(frozen=True)
class FogPartition:
    """Visible/fogged split of the board after a (possibly hypothetical) action."""

    fog: int
    visible: int
    num_squares: int

    def __post_init__(self):
        full = (1 << self.num_squares) - 1
        if (self.fog | self.visible) != full or (self.fog & self.visible) != 0:
            raise ValidationError("fog and visible masks must partition the board")

    @staticmethod
    def from_visible(visible: int, num_squares: int) -> "FogPartition":
        full = (1 << num_squares) - 1
        return FogPartition(fog=full & ~visible, visible=visible, num_squares=num_squares)

    def fog_array(self) -> np.ndarray:
        return mask_to_bool_array(self.fog, self.num_squares)


@dataclass(frozen=True)
class ObservationDistribution:
    """Pushforward of a belief through a partition: per-visible-square atoms
    plus one hidden atom. Fogged squares carry zero by construction."""

    square_probs: np.ndarray
    hidden_mass: float

    def total(self) -> float:
        return float(self.square_probs.sum() + self.hidden_mass)

    def prob_of(self, realized) -> float:
        if realized == HIDDEN or realized is None:
            return self.hidden_mass
        return float(self.square_probs[realized])


@dataclass(frozen=True)
class MetricSample:
    """Per-inference-point metric row. ``turn`` is the 1-based own turn."""

    turn: int
    team: Team
    score_delta: float
    belief_entropy: float
    oracle_ce: float
    observer_ce: float


def _as_distribution(p) -> np.ndarray:
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError("distribution must be a non-empty vector")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ValidationError("distribution entries must be finite and non-negative")
    if abs(float(arr.sum()) - 1.0) > DIST_SUM_TOL:
        raise ValidationError(f"distribution sums to {float(arr.sum())!r}, not 1")
    return arr


def shannon_entropy(p) -> float:
    """H(p) = -sum p_i ln p_i, with 0 ln 0 = 0."""
    arr = _as_distribution(p)
    nz = arr[arr > 0]
    return float(-(nz * np.log(nz)).sum())


def fog_mass(belief, partition: FogPartition) -> float:
    arr = np.asarray(belief, dtype=np.float64)
    return float(arr[partition.fog_array()].sum())


def expected_posterior_entropy(belief, partition: FogPartition) -> float:
    """q_f * H of the renormalized belief over the fogged squares.

    Sums run over the sorted positive masses so the result depends only on
    the multiset of fogged probabilities: actions with identical fogged
    mass profiles tie bit-exactly (greedy argmax sets rely on this).
    """
    arr = np.asarray(belief, dtype=np.float64)
    fogged = arr[partition.fog_array()]
    nz = np.sort(fogged[fogged > 0])
    if nz.size == 0:
        return 0.0
    q_f = float(nz.sum())
    # q_f * H({q_x/q_f}) expanded to avoid forming the renormalized vector
    return float(-(nz * np.log(nz)).sum() + q_f * math.log(q_f))


def information_gain(belief, partition: FogPartition) -> float:
    return shannon_entropy(belief) - expected_posterior_entropy(belief, partition)


def belief_entropy(belief) -> float:
    return shannon_entropy(belief)


def oracle_cross_entropy_sample(belief, true_square: int) -> float:
    """-ln q(true square), floored; averaging over games estimates H(p, q)."""
    q = float(np.asarray(belief, dtype=np.float64)[true_square])
    return -math.log(max(q, LOG_FLOOR))


def pushforward_observation(belief, partition: FogPartition) -> ObservationDistribution:
    arr = np.asarray(belief, dtype=np.float64)
    fog = partition.fog_array()
    square_probs = np.where(fog, 0.0, arr)
    return ObservationDistribution(square_probs=square_probs, hidden_mass=float(arr[fog].sum()))


def observer_cross_entropy_sample(belief, partition: FogPartition, realized) -> float:
    """-ln q_O(realized outcome), floored.

    ``realized`` is a square index when the king was seen there, or HIDDEN
    (or None) when it stayed in the fog.
    """
    if realized is not None and realized != HIDDEN:
        if (partition.fog >> int(realized)) & 1:
            raise ValidationError(f"realized square {realized} lies in the fog")
    q_o = pushforward_observation(belief, partition).prob_of(realized)
    return -math.log(max(q_o, LOG_FLOOR))


METRIC_FIELDS = ("score_delta", "belief_entropy", "oracle_ce", "observer_ce")


def aggregate_per_turn(samples: list[MetricSample]) -> dict:
    """Mean and population standard deviation per (team, turn, metric).

    Returns {(team, turn): {metric: (mean, std, count)}}.
    """
    if not samples:
        raise ValidationError("no samples to aggregate")
    groups: dict[tuple[Team, int], list[MetricSample]] = {}
    for s in samples:
        groups.setdefault((s.team, s.turn), []).append(s)
    out = {}
    for key, rows in groups.items():
        stats = {}
        for name in METRIC_FIELDS:
            values = np.array([getattr(r, name) for r in rows], dtype=np.float64)
            stats[name] = (float(values.mean()), float(values.std()), len(rows))
        out[key] = stats
    return out


def kl_divergence(p, q) -> float:
    """D_KL(p || q) in nats; infinite only if p puts mass where q has none
    (callers on toy processes keep q strictly positive)."""
    p_arr = _as_distribution(p)
    q_arr = _as_distribution(q)
    total = 0.0
    for pi, qi in zip(p_arr, q_arr):
        if pi > 0:
            total += pi * math.log(pi / qi) if qi > 0 else math.inf
    return total
