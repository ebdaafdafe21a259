"""Joint training of the king-belief and visibility heads.

Adam on the summed loss: cross entropy of the king head against the true
opponent king square, plus binary cross entropy of the visibility head
against the opponent's true per-square visibility (both head losses are
batch means; the BCE also averages over squares to keep the two terms on
comparable scales). Batches group examples of equal history length, so no
padding is ever needed.

Desk-scale datasets are heavily game-correlated (50 examples per game),
so generalization needs help: encoder dropout, a little king-CE label
smoothing, and file-mirror augmentation (the rules are left-right
symmetric, so mirrored games are equally valid training signal).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import torch
import torch.nn.functional as F

from ..errors import ModelError, ValidationError
from ..rng import derive_seed
from .data import TrainingExample, example_fog_size, example_king_visible
from .model import BeliefModel

ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8
LABEL_SMOOTHING = 0.05


@dataclass
class EpochStats:
    epoch: int
    total_loss: float
    king_ce: float
    visibility_bce: float


def _length_buckets(examples: list[TrainingExample]) -> dict[int, list[int]]:
    buckets: dict[int, list[int]] = {}
    for i, ex in enumerate(examples):
        buckets.setdefault(len(ex.tokens), []).append(i)
    return buckets


def _batch_tensors(examples: list[TrainingExample], indices: list[int]):
    tokens = torch.from_numpy(np.stack([examples[i].tokens for i in indices]))
    positions = torch.from_numpy(np.stack([examples[i].positions for i in indices]))
    kings = torch.tensor([examples[i].true_king for i in indices], dtype=torch.int64)
    vis = torch.from_numpy(np.stack([examples[i].true_visibility for i in indices]))
    return tokens, positions, kings, vis


def mirror_files(example: TrainingExample, size: int = 8) -> TrainingExample:
    """The left-right mirrored twin of a training example."""
    tokens = np.ascontiguousarray(
        example.tokens.reshape(-1, size, size, 6)[:, :, ::-1].reshape(example.tokens.shape)
    )
    rank, file = divmod(example.true_king, size)
    vis = np.ascontiguousarray(
        example.true_visibility.reshape(size, size)[:, ::-1].reshape(-1)
    )
    return TrainingExample(
        tokens=tokens,
        positions=example.positions,
        true_king=rank * size + (size - 1 - file),
        true_visibility=vis,
    )


def joint_loss(model: BeliefModel, tokens, positions, kings, vis, label_smoothing: float = 0.0):
    king_logits, vis_logits = model(tokens, positions)
    king_ce = F.cross_entropy(king_logits, kings, label_smoothing=label_smoothing)
    vis_bce = F.binary_cross_entropy_with_logits(vis_logits, vis)
    return king_ce + vis_bce, king_ce, vis_bce


def train_belief_models(
    examples: list[TrainingExample],
    epochs: int = 15,
    lr: float = 1e-3,
    batch_size: int = 256,
    seed: int = 0,
    board_size: int = 8,
    label_smoothing: float = LABEL_SMOOTHING,
    augment_mirror: bool = True,
    progress=None,
) -> tuple[BeliefModel, list[EpochStats]]:
    """Train both heads jointly; returns the model and per-epoch losses."""
    if not examples:
        raise ValidationError("training dataset is empty")
    if augment_mirror:
        examples = list(examples) + [mirror_files(ex, board_size) for ex in examples]
    torch.manual_seed(derive_seed(seed, 3))
    model = BeliefModel(board_size=board_size)
    optimizer = torch.optim.Adam(model.parameters(), lr=lr, betas=ADAM_BETAS, eps=ADAM_EPS)
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(4,)))
    buckets = _length_buckets(examples)
    curves: list[EpochStats] = []

    for epoch in range(epochs):
        batches: list[list[int]] = []
        for length in sorted(buckets):
            order = np.array(buckets[length])
            rng.shuffle(order)
            for start in range(0, len(order), batch_size):
                batches.append(order[start : start + batch_size].tolist())
        rng.shuffle(batches)

        model.train()
        sums = np.zeros(3)
        count = 0
        for batch in batches:
            tokens, positions, kings, vis = _batch_tensors(examples, batch)
            loss, king_ce, vis_bce = joint_loss(
                model, tokens, positions, kings, vis, label_smoothing
            )
            if not torch.isfinite(loss):
                raise ModelError(
                    f"non-finite loss at epoch {epoch} "
                    f"(king={float(king_ce)}, visibility={float(vis_bce)})"
                )
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            sums += np.array([loss.item(), king_ce.item(), vis_bce.item()]) * len(batch)
            count += len(batch)
        stats = EpochStats(epoch, sums[0] / count, sums[1] / count, sums[2] / count)
        curves.append(stats)
        if progress is not None:
            progress(stats)
    model.eval()
    return model, curves


def evaluate_oracle_ce(
    model: BeliefModel, examples: list[TrainingExample], batch_size: int = 512
) -> dict:
    """Mean oracle cross entropy of the operational learned belief vs the
    uniform baseline, per turn and overall.

    Operational means the visible-king override applies to both: examples
    where the opponent king is in view contribute zero to either side.
    """
    size = model.board_size
    model.eval()
    model_ce = np.zeros(len(examples))
    uniform_ce = np.zeros(len(examples))
    turns = np.array([ex.turn for ex in examples])
    hidden = [i for i, ex in enumerate(examples) if not example_king_visible(ex, size)]
    for i in hidden:
        uniform_ce[i] = math.log(example_fog_size(examples[i], size))

    by_length: dict[int, list[int]] = {}
    for i in hidden:
        by_length.setdefault(len(examples[i].tokens), []).append(i)
    with torch.no_grad():
        for length in sorted(by_length):
            idx = by_length[length]
            for start in range(0, len(idx), batch_size):
                chunk = idx[start : start + batch_size]
                tokens, positions, kings, _ = _batch_tensors(examples, chunk)
                king_logits, _ = model(tokens, positions)
                log_probs = F.log_softmax(king_logits.double(), dim=-1)
                picked = log_probs[torch.arange(len(chunk)), kings].numpy()
                model_ce[chunk] = np.maximum(-picked, 0.0)
    model_ce = np.minimum(model_ce, -math.log(1e-12))

    per_turn = {}
    for turn in sorted(set(turns.tolist())):
        mask = turns == turn
        per_turn[turn] = (float(model_ce[mask].mean()), float(uniform_ce[mask].mean()))
    return {
        "model_mean": float(model_ce.mean()),
        "uniform_mean": float(uniform_ce.mean()),
        "per_turn": per_turn,
        "mean_gain_over_turns": float(
            np.mean([u - m for m, u in per_turn.values()])
        ),
    }
