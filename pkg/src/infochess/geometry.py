"""Bitboard geometry: neighborhoods, sliding rays, and visibility masks.

A mask is a Python int with bit ``sq`` set for square ``sq``. Rays are
precomputed per (direction, square); termination against blocking pawns is
resolved with the usual nearest-bit trick. Any pawn, either side's,
terminates a ray inclusively: the pawn's own square stays visible, squares
beyond do not. Non-pawn pieces are transparent to vision.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .types import PieceKind

# (df, dr) per direction; positive-index-delta directions first.
ORTHO_DIRS = ((1, 0), (-1, 0), (0, 1), (0, -1))
DIAG_DIRS = ((1, 1), (-1, 1), (1, -1), (-1, -1))
ALL_DIRS = ORTHO_DIRS + DIAG_DIRS


class BoardGeometry:
    """Precomputed masks for one board size. Immutable after construction."""

    def __init__(self, size: int):
        self.size = size
        self.num_squares = size * size
        self.full_mask = (1 << self.num_squares) - 1

        # adjacency (Chebyshev distance exactly 1), not including the square
        self.adjacent = [0] * self.num_squares
        # rays per direction, excluding the origin square, out to the edge
        self.rays: dict[tuple[int, int], list[int]] = {
            d: [0] * self.num_squares for d in ALL_DIRS
        }
        for sq in range(self.num_squares):
            f, r = sq % size, sq // size
            for df in (-1, 0, 1):
                for dr in (-1, 0, 1):
                    if df == 0 and dr == 0:
                        continue
                    nf, nr = f + df, r + dr
                    if 0 <= nf < size and 0 <= nr < size:
                        self.adjacent[sq] |= 1 << (nr * size + nf)
            for df, dr in ALL_DIRS:
                nf, nr = f + df, r + dr
                mask = 0
                while 0 <= nf < size and 0 <= nr < size:
                    mask |= 1 << (nr * size + nf)
                    nf += df
                    nr += dr
                self.rays[(df, dr)][sq] = mask

        # directions whose index delta is positive scan blockers from the LSB
        self._positive = {d: (d[1] * size + d[0]) > 0 for d in ALL_DIRS}

    def ray_visibility(self, sq: int, direction: tuple[int, int], blockers: int) -> int:
        """Squares visible along one ray, ending inclusively at a blocker."""
        ray = self.rays[direction][sq]
        hits = ray & blockers
        if not hits:
            return ray
        if self._positive[direction]:
            nearest = (hits & -hits).bit_length() - 1
        else:
            nearest = hits.bit_length() - 1
        return ray & ~self.rays[direction][nearest]

    def piece_visibility(self, kind: PieceKind, sq: int, pawn_blockers: int) -> int:
        """Visibility mask one piece contributes: own square, neighborhood,
        and for rooks/bishops the four matching rays. ``pawn_blockers``
        holds every pawn on the board regardless of team."""
        mask = (1 << sq) | self.adjacent[sq]
        if kind is PieceKind.ROOK:
            for d in ORTHO_DIRS:
                mask |= self.ray_visibility(sq, d, pawn_blockers)
        elif kind is PieceKind.BISHOP:
            for d in DIAG_DIRS:
                mask |= self.ray_visibility(sq, d, pawn_blockers)
        return mask


@lru_cache(maxsize=None)
def geometry(size: int) -> BoardGeometry:
    return BoardGeometry(size)


def mask_to_squares(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_to_bool_array(mask: int, num_squares: int) -> np.ndarray:
    """Unpack a square mask into a numpy bool vector of length num_squares."""
    nbytes = (num_squares + 7) // 8
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:num_squares].astype(bool)


def bool_array_to_mask(arr) -> int:
    mask = 0
    for i, v in enumerate(arr):
        if v:
            mask |= 1 << i
    return mask
