"""Tic-tac-toe boards, dihedral canonicalization, and the game graph.

Boards are 9-character strings over ``.AB`` in row-major order.  Because
bidding decouples move order from mark counts, any mix of A and B marks can
occur; a board is terminal as soon as a line is completed (that color wins)
or the board fills up, in which case Bob wins (the solved variant awards
ties to Bob).

The state index is reduced by the 8 symmetries of the square; the play layer
works with real (uncanonicalized) cells and maps through the symmetry.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Optional

from .graphs import GameGraph, Outcome, make_graph

EMPTY_BOARD = "." * 9

LINES = (
    (0, 1, 2), (3, 4, 5), (6, 7, 8),
    (0, 3, 6), (1, 4, 7), (2, 5, 8),
    (0, 4, 8), (2, 4, 6),
)

# Cell permutations of the dihedral group of the square (identity first).
_ROT = (6, 3, 0, 7, 4, 1, 8, 5, 2)
_FLIP = (2, 1, 0, 5, 4, 3, 8, 7, 6)


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(p[q[i]] for i in range(9))


def _symmetries() -> tuple[tuple[int, ...], ...]:
    syms = []
    p = tuple(range(9))
    for _ in range(4):
        syms.append(p)
        syms.append(_compose(p, _FLIP))
        p = _compose(p, _ROT)
    return tuple(syms)


SYMMETRIES = _symmetries()


def apply_symmetry(board: str, sym: tuple[int, ...]) -> str:
    return "".join(board[sym[i]] for i in range(9))


def validate_board(board: str) -> str:
    if len(board) != 9 or any(c not in ".AB" for c in board):
        raise ValueError(f"not a board: {board!r} (want 9 chars over .AB)")
    if has_line(board, "A") and has_line(board, "B"):
        raise ValueError(f"board {board!r} has completed lines of both colors")
    return board


@lru_cache(maxsize=1 << 16)
def canonical(board: str) -> str:
    """Lexicographic minimum of the board over the 8 dihedral symmetries."""
    return min(apply_symmetry(board, s) for s in SYMMETRIES)


def canonicalizing_symmetry(board: str) -> tuple[int, ...]:
    """A symmetry carrying ``board`` onto its canonical form."""
    best = canonical(board)
    for s in SYMMETRIES:
        if apply_symmetry(board, s) == best:
            return s
    raise AssertionError("unreachable")


def has_line(board: str, mark: str) -> bool:
    return any(all(board[i] == mark for i in line) for line in LINES)


def board_outcome(board: str) -> Optional[Outcome]:
    if has_line(board, "A"):
        return Outcome.ALICE_WIN
    if has_line(board, "B"):
        return Outcome.BOB_WIN
    if "." not in board:
        return Outcome.BOB_WIN  # ties are awarded to Bob in this variant
    return None


def place(board: str, cell: int, mark: str) -> str:
    if board[cell] != ".":
        raise ValueError(f"cell {cell} is occupied in {board}")
    return board[:cell] + mark + board[cell + 1 :]


def moves(board: str, mark: str) -> list[tuple[int, str]]:
    """Legal placements as (cell, resulting board)."""
    if board_outcome(board) is not None:
        return []
    return [(c, place(board, c, mark)) for c in range(9) if board[c] == "."]


def build_ttt(first_move_restriction: Optional[Iterable[int]] = None) -> GameGraph:
    """Game graph over canonical boards; ties are Bob wins.

    ``first_move_restriction`` limits Alice's placements from the empty
    board to the given cells; Bob and all later moves are unrestricted.
    """
    restriction: Optional[frozenset[int]] = None
    if first_move_restriction is not None:
        restriction = frozenset(first_move_restriction)
        if not restriction:
            raise ValueError("first-move restriction must be nonempty")
        if not restriction <= set(range(9)):
            raise ValueError("restriction cells must be in 0..8")

    index: dict[str, int] = {}
    labels: list[str] = []

    def vid(board: str) -> int:
        if board not in index:
            index[board] = len(labels)
            labels.append(board)
        return index[board]

    start = vid(EMPTY_BOARD)
    red: list[list[int]] = []
    blue: list[list[int]] = []
    outcome: list[Optional[Outcome]] = []
    pending = [EMPTY_BOARD]
    while pending:
        board = pending.pop()
        v = index[board]
        while len(red) < len(labels):
            red.append([])
            blue.append([])
            outcome.append(None)
        out = board_outcome(board)
        if out is not None:
            outcome[v] = out
            continue

        def targets(mark: str, cells: Optional[frozenset[int]]) -> list[int]:
            ts = []
            for c in range(9):
                if board[c] != "." or (cells is not None and c not in cells):
                    continue
                nxt = canonical(place(board, c, mark))
                if nxt not in index:
                    vid(nxt)
                    pending.append(nxt)
                ts.append(index[nxt])
            return ts

        alice_cells = restriction if board == EMPTY_BOARD else None
        red[v] = targets("A", alice_cells)
        blue[v] = targets("B", None)
    while len(red) < len(labels):
        red.append([])
        blue.append([])
        outcome.append(None)
    kind = "ttt"
    if restriction is not None:
        kind = f"ttt:{''.join(str(c) for c in sorted(restriction))}"
    return make_graph(labels, start, red, blue, outcome, 9, kind=kind)
