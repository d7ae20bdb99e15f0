"""Game graphs and constructors for the analyzed game families.

A game is a colored directed graph: red edges are Alice's moves, blue edges
are Bob's, and edge-free vertices are terminal with an outcome (Alice win,
Bob win, or tie).  Graphs are immutable after construction and safe to share
between solver calls.

Serialization uses a versioned JSON document (``"bidgraph-1"``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence


class Outcome(str, Enum):
    ALICE_WIN = "alice_win"
    BOB_WIN = "bob_win"
    TIE = "tie"


SCHEMA_VERSION = "bidgraph-1"


@dataclass(frozen=True)
class GameGraph:
    """Immutable two-player game graph.

    ``red[v]`` / ``blue[v]`` list the target vertices of Alice's / Bob's
    moves from ``v``.  ``outcome[v]`` is set exactly when ``v`` has no
    outgoing edge of either color.  ``bounded_depth`` is present iff no play
    from ``start`` can exceed that many moves.
    """

    labels: tuple[str, ...]
    start: int
    red: tuple[tuple[int, ...], ...]
    blue: tuple[tuple[int, ...], ...]
    outcome: tuple[Optional[Outcome], ...]
    bounded_depth: Optional[int] = None
    kind: str = "custom"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        n = len(self.labels)
        if not (len(self.red) == len(self.blue) == len(self.outcome) == n):
            raise ValueError("vertex arrays must have equal length")
        if not 0 <= self.start < n:
            raise ValueError(f"start vertex {self.start} out of range")
        for adj in (self.red, self.blue):
            for targets in adj:
                for t in targets:
                    if not 0 <= t < n:
                        raise ValueError(f"edge target {t} out of range")
        for v in range(n):
            has_edges = bool(self.red[v]) or bool(self.blue[v])
            if has_edges and self.outcome[v] is not None:
                raise ValueError(f"vertex {v} has edges but carries an outcome")
            if not has_edges and self.outcome[v] is None:
                raise ValueError(f"edge-free vertex {v} lacks an outcome")

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    def is_terminal(self, v: int) -> bool:
        return self.outcome[v] is not None

    def vertex_index(self, label: str) -> int:
        return self.labels.index(label)

    # -- serialization ----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "kind": self.kind,
            "start": self.start,
            "bounded_depth": self.bounded_depth,
            "vertices": [
                {
                    "id": v,
                    "label": self.labels[v],
                    "red": list(self.red[v]),
                    "blue": list(self.blue[v]),
                    "outcome": self.outcome[v].value if self.outcome[v] else None,
                }
                for v in range(self.num_vertices)
            ],
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_json_obj(), indent=indent, sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "GameGraph":
        if obj.get("version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported graph schema: {obj.get('version')!r}")
        verts = sorted(obj["vertices"], key=lambda d: d["id"])
        if [d["id"] for d in verts] != list(range(len(verts))):
            raise ValueError("vertex ids must be 0..n-1")
        return cls(
            labels=tuple(d["label"] for d in verts),
            start=obj["start"],
            red=tuple(tuple(d["red"]) for d in verts),
            blue=tuple(tuple(d["blue"]) for d in verts),
            outcome=tuple(Outcome(d["outcome"]) if d["outcome"] else None for d in verts),
            bounded_depth=obj.get("bounded_depth"),
            kind=obj.get("kind", "custom"),
        )

    @classmethod
    def from_json(cls, text: str) -> "GameGraph":
        return cls.from_json_obj(json.loads(text))


def _dedup(targets: Iterable[int]) -> tuple[int, ...]:
    # Multi-edges between the same pair collapse: a move is identified by
    # the position it reaches.
    return tuple(sorted(set(targets)))


def make_graph(
    labels: Sequence[str],
    start: int,
    red: Sequence[Iterable[int]],
    blue: Sequence[Iterable[int]],
    outcome: Sequence[Optional[Outcome]],
    bounded_depth: Optional[int] = None,
    kind: str = "custom",
    meta: dict | None = None,
) -> GameGraph:
    return GameGraph(
        labels=tuple(labels),
        start=start,
        red=tuple(_dedup(t) for t in red),
        blue=tuple(_dedup(t) for t in blue),
        outcome=tuple(outcome),
        bounded_depth=bounded_depth,
        kind=kind,
        meta=meta or {},
    )


# -- game families ---------------------------------------------------------


def build_tug(n: int) -> GameGraph:
    """Tug o' war on a path of length 2n.

    Vertices are labeled -n..n, play starts at 0, and adjacent vertices are
    joined by edges of both colors in both directions.  Vertex ``n`` is an
    Alice win, ``-n`` a Bob win.  The graph is cyclic.
    """
    if n < 1:
        raise ValueError("tug length must be >= 1")
    idx = {j: j + n for j in range(-n, n + 1)}
    labels = [str(j) for j in range(-n, n + 1)]
    red: list[list[int]] = [[] for _ in labels]
    blue: list[list[int]] = [[] for _ in labels]
    outcome: list[Optional[Outcome]] = [None] * len(labels)
    for j in range(-n, n + 1):
        if j == n:
            outcome[idx[j]] = Outcome.ALICE_WIN
        elif j == -n:
            outcome[idx[j]] = Outcome.BOB_WIN
        else:
            for t in (j - 1, j + 1):
                red[idx[j]].append(idx[t])
                blue[idx[j]].append(idx[t])
    return make_graph(labels, idx[0], red, blue, outcome, None, kind=f"tug:{n}")


def build_ult(n: int) -> GameGraph:
    """Ultimatum game of degree n.

    Vertices B, -n..n, A.  Red edges: 0 -> n, k -> A for k > 0, k -> k+1 for
    k < 0.  Blue edges mirrored.  The first mover sends the opponent down an
    n-move forced path back to the start.
    """
    if n < 1:
        raise ValueError("ultimatum degree must be >= 1")
    labels = ["B"] + [str(j) for j in range(-n, n + 1)] + ["A"]
    idx_b = 0
    idx_a = len(labels) - 1
    idx = {j: j + n + 1 for j in range(-n, n + 1)}
    red: list[list[int]] = [[] for _ in labels]
    blue: list[list[int]] = [[] for _ in labels]
    outcome: list[Optional[Outcome]] = [None] * len(labels)
    outcome[idx_b] = Outcome.BOB_WIN
    outcome[idx_a] = Outcome.ALICE_WIN
    red[idx[0]].append(idx[n])
    blue[idx[0]].append(idx[-n])
    for j in range(1, n + 1):
        red[idx[j]].append(idx_a)
        blue[idx[j]].append(idx[j - 1])
    for j in range(-n, 0):
        blue[idx[j]].append(idx_b)
        red[idx[j]].append(idx[j + 1])
    return make_graph(labels, idx[0], red, blue, outcome, None, kind=f"ult:{n}")


def _terminal(label: str, outcome: Outcome, kind: str) -> GameGraph:
    return make_graph([label], 0, [[]], [[]], [outcome], 0, kind=kind)


def _block_of_move(m: int) -> int:
    # Moves are grouped in blocks of sizes 1, 2, 3, ...; move m belongs to
    # block j with j(j-1)/2 < m <= j(j+1)/2.
    j = 1
    while j * (j + 1) // 2 < m:
        j += 1
    return j


def build_primitive(kind: str, n: int | None = None) -> GameGraph:
    """Construct one of the small benchmark games.

    Kinds: ``A`` (Alice already won), ``B`` (Bob already won), ``E`` (first
    mover wins), ``A_pow``/``B_pow`` (that player wins by making any of the
    first n moves), ``bid_zero`` (alias of ``B_pow``: Bob wins by getting any
    of the next n moves), ``second_move_wins``, ``win_after`` (the game ends
    in an Alice win after n moves by anyone), and ``ladies_blocks`` (Alice
    wins by taking every move of one of the first n blocks of sizes 1..n;
    surviving all blocks is a tie).
    """
    if kind == "A":
        return _terminal("A", Outcome.ALICE_WIN, "A")
    if kind == "B":
        return _terminal("B", Outcome.BOB_WIN, "B")
    if kind == "E":
        return make_graph(
            ["start", "A", "B"],
            0,
            [[1], [], []],
            [[2], [], []],
            [None, Outcome.ALICE_WIN, Outcome.BOB_WIN],
            1,
            kind="E",
        )
    if kind == "second_move_wins":
        return make_graph(
            ["start", "mid", "A", "B"],
            0,
            [[1], [2], [], []],
            [[1], [3], [], []],
            [None, None, Outcome.ALICE_WIN, Outcome.BOB_WIN],
            2,
            kind="second_move_wins",
        )
    if n is None or n < 1:
        raise ValueError(f"kind {kind!r} needs a positive parameter n")
    if kind in ("A_pow", "B_pow", "bid_zero"):
        # Chain v_0..v_{n-1}; the favored player escapes to their terminal
        # from any vertex, the other grinds down the chain.
        labels = [f"v{i}" for i in range(n)] + ["A", "B"]
        ia, ib = n, n + 1
        red: list[list[int]] = [[] for _ in labels]
        blue: list[list[int]] = [[] for _ in labels]
        outcome: list[Optional[Outcome]] = [None] * n + [Outcome.ALICE_WIN, Outcome.BOB_WIN]
        for i in range(n):
            nxt = i + 1 if i + 1 < n else None
            if kind == "A_pow":
                red[i].append(ia)
                blue[i].append(nxt if nxt is not None else ib)
            else:
                blue[i].append(ib)
                red[i].append(nxt if nxt is not None else ia)
        k = "A_pow" if kind == "A_pow" else kind
        return make_graph(labels, 0, red, blue, outcome, n, kind=f"{k}:{n}")
    if kind == "win_after":
        labels = [f"v{i}" for i in range(n)] + ["A"]
        red = [[i + 1] for i in range(n)]
        blue = [[i + 1] for i in range(n)]
        red.append([])
        blue.append([])
        outcome = [None] * n + [Outcome.ALICE_WIN]
        return make_graph(labels, 0, red, blue, outcome, n, kind=f"win_after:{n}")
    if kind == "ladies_blocks":
        total = n * (n + 1) // 2
        # Vertex (m, alive): next move is number m, and Alice still owns
        # every earlier move of m's block.
        states: dict[tuple[int, bool], int] = {}
        labels = []

        def vid(m: int, alive: bool) -> int:
            key = (m, alive)
            if key not in states:
                states[key] = len(labels)
                labels.append(f"m{m}{'+' if alive else '-'}")
            return states[key]

        start = vid(1, True)
        red: list[list[int]] = []
        blue: list[list[int]] = []
        outcome: list[Optional[Outcome]] = []
        pending = [(1, True)]
        seen = {(1, True)}
        ia = None
        it = None
        while pending:
            m, alive = pending.pop()
            v = vid(m, alive)
            while len(red) < len(labels):
                red.append([])
                blue.append([])
                outcome.append(None)
            jblock = _block_of_move(m)
            last_of_block = m == jblock * (jblock + 1) // 2

            def push(m2: int, alive2: bool) -> int:
                t = vid(m2, alive2)
                if (m2, alive2) not in seen:
                    seen.add((m2, alive2))
                    pending.append((m2, alive2))
                return t

            def succ(taken_by_alice: bool) -> int | None:
                nonlocal ia, it
                if taken_by_alice and alive and last_of_block:
                    if ia is None:
                        ia = vid(-1, True)
                        labels[ia] = "A"
                    return ia
                if m == total:
                    if it is None:
                        it = vid(-2, True)
                        labels[it] = "tie"
                    return it
                new_block = _block_of_move(m + 1) != jblock
                alive2 = True if new_block else (alive and taken_by_alice)
                return push(m + 1, alive2)

            red[v] = [succ(True)]
            blue[v] = [succ(False)]
        while len(red) < len(labels):
            red.append([])
            blue.append([])
            outcome.append(None)
        if ia is not None:
            red[ia] = []
            blue[ia] = []
            outcome[ia] = Outcome.ALICE_WIN
        if it is not None:
            red[it] = []
            blue[it] = []
            outcome[it] = Outcome.TIE
        return make_graph(labels, start, red, blue, outcome, total, kind=f"ladies_blocks:{n}")
    raise ValueError(f"unknown primitive kind: {kind!r}")


def wedge_many(games: Sequence[GameGraph]) -> GameGraph:
    """Flat wedge: a fresh start whose first mover picks any sub-start."""
    if not games:
        raise ValueError("wedge of no games")
    offs = []
    off = 1
    for sub in games:
        offs.append(off)
        off += sub.num_vertices
    labels = ["wedge"]
    red: list[list[int]] = [[offs[i] + g.start for i, g in enumerate(games)]]
    blue: list[list[int]] = [list(red[0])]
    outcome: list[Optional[Outcome]] = [None]
    for i, sub in enumerate(games):
        for v in range(sub.num_vertices):
            labels.append(f"{i}:{sub.labels[v]}")
            red.append([offs[i] + t for t in sub.red[v]])
            blue.append([offs[i] + t for t in sub.blue[v]])
            outcome.append(sub.outcome[v])
    depth = None
    if all(g.bounded_depth is not None for g in games):
        depth = 1 + max(g.bounded_depth for g in games)  # type: ignore[type-var]
    kind = "wedge(" + ",".join(g.kind for g in games) + ")"
    return make_graph(labels, 0, red, blue, outcome, depth, kind=kind)


def wedge(g: GameGraph, h: GameGraph) -> GameGraph:
    """Wedge sum: a fresh start whose first mover picks either sub-start."""
    return wedge_many((g, h))


def with_start(g: GameGraph, start: int) -> GameGraph:
    """The same game played from a different starting position."""
    return GameGraph(
        labels=g.labels,
        start=start,
        red=g.red,
        blue=g.blue,
        outcome=g.outcome,
        bounded_depth=g.bounded_depth,
        kind=f"{g.kind}@{g.labels[start]}",
    )


def reverse(g: GameGraph) -> GameGraph:
    """Role swap: red and blue edges exchanged, win outcomes exchanged."""
    swapped = {
        Outcome.ALICE_WIN: Outcome.BOB_WIN,
        Outcome.BOB_WIN: Outcome.ALICE_WIN,
        Outcome.TIE: Outcome.TIE,
    }
    return make_graph(
        g.labels,
        g.start,
        g.blue,
        g.red,
        [swapped[o] if o else None for o in g.outcome],
        g.bounded_depth,
        kind=f"reverse({g.kind})",
    )


def truncate(g: GameGraph, n: int) -> GameGraph:
    """Cut the game off after n moves; unfinished positions become ties."""
    if n < 0:
        raise ValueError("truncation depth must be >= 0")
    states: dict[tuple[int, int], int] = {}
    labels: list[str] = []

    def vid(v: int, d: int) -> int:
        key = (v, d)
        if key not in states:
            states[key] = len(labels)
            labels.append(f"{g.labels[v]}@{d}")
        return states[key]

    start = vid(g.start, 0)
    red: list[list[int]] = []
    blue: list[list[int]] = []
    outcome: list[Optional[Outcome]] = []
    pending = [(g.start, 0)]
    seen = {(g.start, 0)}
    while pending:
        v, d = pending.pop()
        i = vid(v, d)
        while len(red) < len(labels):
            red.append([])
            blue.append([])
            outcome.append(None)
        if g.outcome[v] is not None:
            outcome[i] = g.outcome[v]
            continue
        if d == n:
            outcome[i] = Outcome.TIE
            continue

        def push(t: int) -> int:
            if (t, d + 1) not in seen:
                seen.add((t, d + 1))
                pending.append((t, d + 1))
            return vid(t, d + 1)

        red[i] = [push(t) for t in g.red[v]]
        blue[i] = [push(t) for t in g.blue[v]]
    while len(red) < len(labels):
        red.append([])
        blue.append([])
        outcome.append(None)
    return make_graph(labels, start, red, blue, outcome, n, kind=f"trunc({g.kind},{n})")


def longest_path_from_start(g: GameGraph) -> int | None:
    """Length of the longest play from start, or None if plays can cycle."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = [WHITE] * g.num_vertices
    depth: list[int | None] = [None] * g.num_vertices
    stack: list[tuple[int, bool]] = [(g.start, False)]
    while stack:
        v, processed = stack.pop()
        if processed:
            best = 0
            for t in g.red[v] + g.blue[v]:
                d = depth[t]
                assert d is not None
                best = max(best, 1 + d)
            depth[v] = best
            color[v] = BLACK
            continue
        if color[v] == BLACK:
            continue
        if color[v] == GRAY:
            return None
        color[v] = GRAY
        stack.append((v, True))
        for t in g.red[v] + g.blue[v]:
            if color[t] == GRAY:
                return None
            if color[t] == WHITE:
                stack.append((t, False))
    return depth[g.start]


def topological_order(g: GameGraph) -> list[int]:
    """Vertices reachable from start, children before parents.

    Raises if the reachable part has a cycle (the graph is not bounded).
    """
    order: list[int] = []
    WHITE, GRAY, BLACK = 0, 1, 2
    color = [WHITE] * g.num_vertices
    stack: list[tuple[int, bool]] = [(g.start, False)]
    while stack:
        v, processed = stack.pop()
        if processed:
            color[v] = BLACK
            order.append(v)
            continue
        if color[v] == BLACK:
            continue
        if color[v] == GRAY:
            raise ValueError("graph has a reachable cycle; not bounded")
        color[v] = GRAY
        stack.append((v, True))
        for t in g.red[v] + g.blue[v]:
            if color[t] == GRAY:
                raise ValueError("graph has a reachable cycle; not bounded")
            if color[t] == WHITE:
                stack.append((t, False))
    return order
