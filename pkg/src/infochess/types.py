"""Fundamental board types: teams, piece kinds, squares, moves, phases.

Squares are plain integers ``index = rank * size + file`` with rank 0 being
White's back row. Helpers convert between indices, (file, rank) pairs and
algebraic names ("a1" is file 0, rank 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Optional

from .errors import ValidationError


class Team(IntEnum):
    WHITE = 0
    BLACK = 1

    @property
    def opponent(self) -> "Team":
        return Team.BLACK if self is Team.WHITE else Team.WHITE

    def __str__(self) -> str:
        return self.name.lower()


class PieceKind(IntEnum):
    # Order is load-bearing: it fixes the piece one-hot channel layout used
    # by the observation encoding and the move feature vector.
    PAWN = 0
    ROOK = 1
    BISHOP = 2
    KING = 3

    def __str__(self) -> str:
        return self.name.lower()


NON_KING_KINDS = (PieceKind.PAWN, PieceKind.ROOK, PieceKind.BISHOP)


class TurnPhase(Enum):
    NON_KING_MOVE = "non_king_move"
    KING_MOVE = "king_move"
    INFERENCE = "inference"


def square_index(file: int, rank: int, size: int = 8) -> int:
    if not (0 <= file < size and 0 <= rank < size):
        raise ValidationError(f"square ({file}, {rank}) off a {size}x{size} board")
    return rank * size + file


def square_file(sq: int, size: int = 8) -> int:
    return sq % size


def square_rank(sq: int, size: int = 8) -> int:
    return sq // size


def square_name(sq: int, size: int = 8) -> str:
    return chr(ord("a") + square_file(sq, size)) + str(square_rank(sq, size) + 1)


def parse_square(name: str, size: int = 8) -> int:
    if len(name) < 2:
        raise ValidationError(f"bad square name {name!r}")
    file = ord(name[0].lower()) - ord("a")
    try:
        rank = int(name[1:]) - 1
    except ValueError:
        raise ValidationError(f"bad square name {name!r}") from None
    return square_index(file, rank, size)


def chebyshev(a: int, b: int, size: int = 8) -> int:
    return max(
        abs(square_file(a, size) - square_file(b, size)),
        abs(square_rank(a, size) - square_rank(b, size)),
    )


@dataclass(frozen=True)
class MoveAction:
    """One movement-phase action: slide a piece one square, or pass.

    A pass carries no piece/squares; it is only legal when the phase has no
    legal destination (the forced-pass rule).
    """

    piece: Optional[PieceKind]
    from_sq: Optional[int]
    to_sq: Optional[int]
    is_pass: bool = False

    @staticmethod
    def passing() -> "MoveAction":
        return MoveAction(piece=None, from_sq=None, to_sq=None, is_pass=True)

    def __str__(self) -> str:
        if self.is_pass:
            return "pass"
        return f"{self.piece}:{square_name(self.from_sq)}{square_name(self.to_sq)}"


@dataclass
class Piece:
    """A piece on the board. Pieces are never captured or removed."""

    kind: PieceKind
    team: Team
    square: int
