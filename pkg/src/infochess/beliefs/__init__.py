"""Belief construction over the opponent king and over own-king exposure."""

from .encoding import (
    HistoryEncoder,
    canonical_square,
    decanonicalize_vector,
    encode_history,
    encode_observation,
)
from .model import (
    BeliefModel,
    load_belief_model,
    predict_king_belief,
    predict_visibility,
    save_belief_model,
    trunk_hash,
)
from .uniform import uniform_belief

__all__ = [
    "HistoryEncoder",
    "BeliefModel",
    "canonical_square",
    "decanonicalize_vector",
    "encode_history",
    "encode_observation",
    "load_belief_model",
    "predict_king_belief",
    "predict_visibility",
    "save_belief_model",
    "trunk_hash",
    "uniform_belief",
]
