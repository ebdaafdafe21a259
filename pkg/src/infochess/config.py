"""Game configuration: board size, horizon, piece rosters, king candidates.

The default setup per side is one rook, one bishop, and a full pawn wall on
the second rank, with the king drawn uniformly from four back-row candidate
squares. Pawn walls matter: pawns terminate sight rays, so each side starts
sealed behind its wall and vision channels open up only as pawns advance.
Everything is overridable; rosters and candidates are given in algebraic
notation in the JSON form.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .errors import ConfigError
from .types import PieceKind, Team, parse_square, square_name, square_rank

RosterEntry = tuple[PieceKind, int]

_DEFAULT_WHITE = ((PieceKind.ROOK, "a1"), (PieceKind.BISHOP, "h1")) + tuple(
    (PieceKind.PAWN, file + "2") for file in "abcdefgh"
)
_DEFAULT_BLACK = ((PieceKind.ROOK, "a8"), (PieceKind.BISHOP, "h8")) + tuple(
    (PieceKind.PAWN, file + "7") for file in "abcdefgh"
)
_DEFAULT_KING_CANDIDATES = {
    Team.WHITE: ("c1", "d1", "e1", "f1"),
    Team.BLACK: ("c8", "d8", "e8", "f8"),
}


def _default_rosters() -> dict[Team, tuple[RosterEntry, ...]]:
    return {
        Team.WHITE: tuple((k, parse_square(s)) for k, s in _DEFAULT_WHITE),
        Team.BLACK: tuple((k, parse_square(s)) for k, s in _DEFAULT_BLACK),
    }


def _default_candidates() -> dict[Team, tuple[int, ...]]:
    return {
        t: tuple(parse_square(s) for s in sqs)
        for t, sqs in _DEFAULT_KING_CANDIDATES.items()
    }


@dataclass(frozen=True)
class GameConfig:
    board_size: int = 8
    turns_per_side: int = 25
    rosters: Mapping[Team, tuple[RosterEntry, ...]] = field(
        default_factory=_default_rosters
    )
    king_candidates: Mapping[Team, tuple[int, ...]] = field(
        default_factory=_default_candidates
    )
    seed: int = 0

    def __post_init__(self):
        if self.board_size < 2:
            raise ConfigError("board_size must be at least 2")
        if self.turns_per_side < 1:
            raise ConfigError("turns_per_side must be at least 1")
        if not (0 <= self.seed < 2**64):
            raise ConfigError("seed must be an unsigned 64-bit integer")
        n = self.board_size * self.board_size
        occupied: set[int] = set()
        for team in (Team.WHITE, Team.BLACK):
            for kind, sq in self.rosters.get(team, ()):
                if kind is PieceKind.KING:
                    raise ConfigError("kings are placed via king_candidates, not the roster")
                if not (0 <= sq < n):
                    raise ConfigError(f"roster square {sq} off the board")
                if sq in occupied:
                    raise ConfigError(f"roster squares overlap at {square_name(sq, self.board_size)}")
                occupied.add(sq)
            candidates = self.king_candidates.get(team, ())
            if not candidates:
                raise ConfigError(f"no king candidates for {team}")
            back_row = 0 if team is Team.WHITE else self.board_size - 1
            for sq in candidates:
                if not (0 <= sq < n):
                    raise ConfigError(f"king candidate {sq} off the board")
                if square_rank(sq, self.board_size) != back_row:
                    raise ConfigError("king candidates must lie on the back row")
                if sq in occupied:
                    raise ConfigError(
                        f"king candidate {square_name(sq, self.board_size)} collides with the roster"
                    )

    def with_seed(self, seed: int) -> "GameConfig":
        return replace(self, seed=seed)

    def to_json_dict(self) -> dict:
        return {
            "board_size": self.board_size,
            "turns_per_side": self.turns_per_side,
            "rosters": {
                str(team): [[str(kind), square_name(sq, self.board_size)] for kind, sq in roster]
                for team, roster in self.rosters.items()
            },
            "king_candidates": {
                str(team): [square_name(sq, self.board_size) for sq in sqs]
                for team, sqs in self.king_candidates.items()
            },
            "seed": self.seed,
        }

    @staticmethod
    def from_json_dict(data: Mapping) -> "GameConfig":
        kwargs: dict = {}
        if "board_size" in data:
            kwargs["board_size"] = int(data["board_size"])
        if "turns_per_side" in data:
            kwargs["turns_per_side"] = int(data["turns_per_side"])
        if "seed" in data:
            kwargs["seed"] = int(data["seed"])
        size = kwargs.get("board_size", 8)
        if "rosters" in data:
            kwargs["rosters"] = {
                Team[name.upper()]: tuple(
                    (PieceKind[k.upper()], parse_square(s, size)) for k, s in entries
                )
                for name, entries in data["rosters"].items()
            }
        if "king_candidates" in data:
            kwargs["king_candidates"] = {
                Team[name.upper()]: tuple(parse_square(s, size) for s in squares)
                for name, squares in data["king_candidates"].items()
            }
        return GameConfig(**kwargs)


def config_hash(config: GameConfig) -> str:
    canonical = json.dumps(config.to_json_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def load_config(path) -> GameConfig:
    with open(path) as fh:
        return GameConfig.from_json_dict(json.load(fh))


def save_config(config: GameConfig, path) -> None:
    with open(path, "w") as fh:
        json.dump(config.to_json_dict(), fh, indent=2)
        fh.write("\n")
