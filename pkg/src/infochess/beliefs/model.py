"""The shared-trunk belief network and its parameter bundle format.

A two-layer self-attention encoder (4 heads, width 128) over the encoded
observation history feeds two feed-forward heads: one emits logits over
board squares for the opponent king location, the other per-square logits
for whether the opponent currently sees each square. The representation
for both heads is the final history token's encoding.

Parameters are stored as an .npz bundle: one array per layer plus a JSON
manifest (layer names, shapes, engine version); loading validates shapes.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np
import torch
from torch import nn

from .. import __version__ as ENGINE_VERSION
from ..errors import ModelError

D_MODEL = 128
N_HEADS = 4
N_LAYERS = 2
D_FEEDFORWARD = 256
MAX_POSITIONS = 64
DROPOUT = 0.1  # active in training only; every prediction path runs in eval

HEAD_PREFIXES = ("king_head.", "visibility_head.")


class BeliefModel(nn.Module):
    def __init__(self, board_size: int = 8, max_positions: int = MAX_POSITIONS):
        super().__init__()
        self.board_size = board_size
        self.num_squares = board_size * board_size
        in_dim = self.num_squares * 6
        self.input_proj = nn.Linear(in_dim, D_MODEL)
        self.pos_embedding = nn.Embedding(max_positions, D_MODEL)
        layer = nn.TransformerEncoderLayer(
            d_model=D_MODEL,
            nhead=N_HEADS,
            dim_feedforward=D_FEEDFORWARD,
            dropout=DROPOUT,
            batch_first=True,
        )
        self.encoder = nn.TransformerEncoder(layer, N_LAYERS, enable_nested_tensor=False)
        self.king_head = nn.Sequential(
            nn.Linear(D_MODEL, D_MODEL), nn.ReLU(), nn.Linear(D_MODEL, self.num_squares)
        )
        self.visibility_head = nn.Sequential(
            nn.Linear(D_MODEL, D_MODEL), nn.ReLU(), nn.Linear(D_MODEL, self.num_squares)
        )

    def encode_last(
        self,
        tokens: torch.Tensor,
        positions: torch.Tensor,
        padding_mask: torch.Tensor | None = None,
    ) -> torch.Tensor:
        """Trunk representation at the final (most recent) history token.

        tokens: (B, T, in_dim); positions: (B, T) int64. With a padding
        mask, batches must be left-aligned and the last *real* token is
        found per row; without one, it is simply index T-1.
        """
        x = self.input_proj(tokens) + self.pos_embedding(positions)
        h = self.encoder(x, src_key_padding_mask=padding_mask)
        if padding_mask is None:
            return h[:, -1]
        lengths = (~padding_mask).sum(dim=1) - 1
        return h[torch.arange(h.shape[0]), lengths]

    def forward(self, tokens, positions, padding_mask=None):
        rep = self.encode_last(tokens, positions, padding_mask)
        return self.king_head(rep), self.visibility_head(rep)

    def trunk_parameters(self):
        for name, param in self.named_parameters():
            if not name.startswith(HEAD_PREFIXES):
                yield param


def _single_forward(model: BeliefModel, tokens: np.ndarray, positions: np.ndarray):
    model.eval()  # keep one attention code path so predictions are bit-stable
    with torch.inference_mode():
        t = torch.from_numpy(np.ascontiguousarray(tokens, dtype=np.float32)).unsqueeze(0)
        p = torch.from_numpy(np.ascontiguousarray(positions)).unsqueeze(0)
        king_logits, vis_logits = model(t, p)
    return king_logits[0], vis_logits[0]


def predict_king_belief(model: BeliefModel, tokens: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Softmax belief over squares, in the viewer's canonical frame."""
    if len(tokens) == 0:
        raise ModelError("history must contain at least one observation")
    king_logits, _ = _single_forward(model, tokens, positions)
    if not torch.isfinite(king_logits).all():
        raise ModelError("king head produced non-finite logits")
    return torch.softmax(king_logits.double(), dim=-1).numpy()


def predict_visibility(model: BeliefModel, tokens: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Per-square probability the opponent currently sees that square."""
    if len(tokens) == 0:
        raise ModelError("history must contain at least one observation")
    _, vis_logits = _single_forward(model, tokens, positions)
    if not torch.isfinite(vis_logits).all():
        raise ModelError("visibility head produced non-finite logits")
    return torch.sigmoid(vis_logits.double()).numpy()


def trunk_hash(model: BeliefModel) -> str:
    digest = hashlib.sha256()
    state = model.state_dict()
    for name in sorted(state):
        if not name.startswith(HEAD_PREFIXES):
            digest.update(name.encode())
            digest.update(state[name].numpy().tobytes())
    return digest.hexdigest()[:16]


def save_belief_model(model: BeliefModel, path) -> None:
    state = {name: tensor.numpy() for name, tensor in model.state_dict().items()}
    manifest = {
        "engine_version": ENGINE_VERSION,
        "board_size": model.board_size,
        "max_positions": int(model.pos_embedding.num_embeddings),
        "layers": {name: list(arr.shape) for name, arr in state.items()},
        "trunk_hash": trunk_hash(model),
    }
    np.savez(path, __manifest__=np.frombuffer(json.dumps(manifest).encode(), dtype=np.uint8), **state)


def load_belief_model(path) -> BeliefModel:
    with np.load(path) as bundle:
        manifest = json.loads(bytes(bundle["__manifest__"]).decode())
        model = BeliefModel(
            board_size=manifest["board_size"], max_positions=manifest["max_positions"]
        )
        state = {}
        for name, shape in manifest["layers"].items():
            if name not in bundle:
                raise ModelError(f"bundle is missing layer {name}")
            arr = bundle[name]
            if list(arr.shape) != shape:
                raise ModelError(f"layer {name} has shape {list(arr.shape)}, manifest says {shape}")
            state[name] = torch.from_numpy(arr)
    expected = {name: tuple(t.shape) for name, t in model.state_dict().items()}
    for name, tensor in state.items():
        if name not in expected or expected[name] != tuple(tensor.shape):
            raise ModelError(f"layer {name} does not fit this engine version")
    model.load_state_dict(state)
    model.eval()
    return model
