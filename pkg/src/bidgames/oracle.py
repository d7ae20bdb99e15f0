"""Retrograde ground truth over explicit chip states.

For a finite game, a chip total ``k`` and a tie-breaking rule, every state
``(vertex, alice_chips, token_holder)`` is classified as an Alice win, a Bob
win, or a draw.  A player's win set is the least fixed point of "can force
the next round into the set": the player commits a bid (their tie decision,
where they own one, may react to the revealed bids), every opposing bid and
decision is quantified universally, and the bid winner elects who moves
(forced movers still pick their own edge).

Two implementations are kept deliberately: a vectorized sweep used
everywhere, and a transparent pure-Python reference (`solve_chip_states_slow`)
that the test suite checks it against.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .bidding import Player, Rule
from .graphs import GameGraph, Outcome
from .holdings import ChipHolding, Marker

DEFAULT_STATE_CAP = 2_000_000


class Verdict(str, Enum):
    ALICE_WIN = "alice_win"
    BOB_WIN = "bob_win"
    DRAW = "draw"


HOLDER_INDEX = {Player.ALICE: 0, Player.BOB: 1}
UNRANKED = np.iinfo(np.int32).max


@dataclass(frozen=True)
class ChipState:
    """One oracle state: position, Alice's chips, and the token holder."""

    vertex: int
    alice: int
    k: int
    holder: Optional[Player]  # star / -eps / eps holder; None under ladies-first

    def __post_init__(self) -> None:
        if not 0 <= self.alice <= self.k:
            raise ValueError("alice's chips must lie in 0..k")

    @property
    def bob(self) -> int:
        return self.k - self.alice

    def alice_holding(self, rule: Rule) -> ChipHolding:
        if rule is Rule.STANDARD:
            marker = Marker.STAR if self.holder is Player.ALICE else Marker.PLAIN
        elif rule is Rule.MAKE_IT_TAKE_IT:
            marker = Marker.MINUS_EPS if self.holder is Player.ALICE else Marker.PLAIN
        else:
            marker = Marker.PLAIN
        return ChipHolding(self.alice, marker)


MoveFilter = Callable[[int, Sequence[int]], Sequence[int]]


def _adjacency(
    g: GameGraph,
    red_filter: Optional[MoveFilter],
    blue_filter: Optional[MoveFilter],
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    red = []
    blue = []
    for v in range(g.num_vertices):
        r: Iterable[int] = g.red[v]
        b: Iterable[int] = g.blue[v]
        if red_filter is not None:
            r = red_filter(v, g.red[v])
        if blue_filter is not None:
            b = blue_filter(v, g.blue[v])
        red.append(tuple(r))
        blue.append(tuple(b))
    return red, blue


def _holder_count(rule: Rule) -> int:
    return 1 if rule is Rule.LADIES_FIRST else 2


@dataclass
class OutcomeTable:
    """Solved win/lose/draw classification for every chip state."""

    graph: GameGraph
    k: int
    rule: Rule
    alice_win: np.ndarray  # bool [V, k+1, H]
    bob_win: np.ndarray
    alice_rank: np.ndarray  # int32, round index at which the state was won
    bob_rank: np.ndarray

    def _hidx(self, holder: Optional[Player]) -> int:
        if self.rule is Rule.LADIES_FIRST:
            if holder is not None:
                raise ValueError("ladies-first has no token holder")
            return 0
        if holder is None:
            raise ValueError(f"rule {self.rule.value} needs a token holder")
        return HOLDER_INDEX[holder]

    def verdict(self, state: ChipState) -> Verdict:
        h = self._hidx(state.holder)
        if self.alice_win[state.vertex, state.alice, h]:
            return Verdict.ALICE_WIN
        if self.bob_win[state.vertex, state.alice, h]:
            return Verdict.BOB_WIN
        return Verdict.DRAW

    def states(self) -> Iterable[ChipState]:
        holders: tuple[Optional[Player], ...]
        holders = (None,) if self.rule is Rule.LADIES_FIRST else (Player.ALICE, Player.BOB)
        for v in range(self.graph.num_vertices):
            for a in range(self.k + 1):
                for holder in holders:
                    yield ChipState(v, a, self.k, holder)

    def csv_rows(self) -> list[tuple[str, str, str, str]]:
        rows = []
        for s in self.states():
            rows.append(
                (
                    self.graph.labels[s.vertex],
                    str(s.alice_holding(self.rule)),
                    s.holder.value if s.holder else "-",
                    self.verdict(s).value,
                )
            )
        return rows


# -- round semantics (scalar form, shared by the reference solver) ----------


def _resolutions(
    rule: Rule,
    k: int,
    a: int,
    h: Optional[Player],
    x: int,
    y: int,
) -> list[tuple[Player, int, Optional[Player]]] | tuple[Player, list]:
    """Outcomes of bids (x, y): a list of (winner, alice_after, holder_after).

    Non-ties and choiceless ties give one entry; a standard-rule tie gives
    the two branches with the chooser tagged first.
    """
    if x > y:
        winner = Player.ALICE
        a2 = a - x
        if rule is Rule.STANDARD:
            h2 = h
        elif rule is Rule.LADIES_FIRST:
            h2 = None
        else:
            h2 = Player.BOB  # loser takes the token
        return [(winner, a2, h2)]
    if y > x:
        winner = Player.BOB
        a2 = a + y
        if rule is Rule.STANDARD:
            h2 = h
        elif rule is Rule.LADIES_FIRST:
            h2 = None
        else:
            h2 = Player.ALICE
        return [(winner, a2, h2)]
    # tied chip counts
    if rule is Rule.STANDARD:
        assert h is not None
        if h is Player.ALICE:
            return [
                (Player.ALICE, a - x, Player.BOB),  # self-win: pay, pass token
                (Player.BOB, a + x, Player.ALICE),  # decline: keep token
            ]
        return [
            (Player.BOB, a + x, Player.ALICE),
            (Player.ALICE, a - x, Player.BOB),
        ]
    if rule is Rule.MAKE_IT_TAKE_IT:
        assert h is not None
        if h is Player.ALICE:  # Alice holds -eps, loses the tie
            return [(Player.BOB, a + x, Player.ALICE)]
        return [(Player.ALICE, a - x, Player.BOB)]
    if rule is Rule.LOSERS_BALL:
        assert h is not None
        if h is Player.ALICE:  # eps holder wins the tie
            return [(Player.ALICE, a - x, Player.BOB)]
        return [(Player.BOB, a + x, Player.ALICE)]
    return [(Player.ALICE, a - x, None)]  # ladies first


def solve_chip_states_slow(
    g: GameGraph,
    k: int,
    rule: Rule,
    red_filter: Optional[MoveFilter] = None,
    blue_filter: Optional[MoveFilter] = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> OutcomeTable:
    """Reference fixed point in plain Python; only for small instances."""
    red, blue = _adjacency(g, red_filter, blue_filter)
    H = _holder_count(rule)
    V = g.num_vertices
    if V * (k + 1) * H > state_cap:
        raise ValueError("state space exceeds the configured cap")

    def solve_for(player: Player) -> tuple[np.ndarray, np.ndarray]:
        target = Outcome.ALICE_WIN if player is Player.ALICE else Outcome.BOB_WIN
        win = np.zeros((V, k + 1, H), dtype=bool)
        rank = np.full((V, k + 1, H), UNRANKED, dtype=np.int32)
        for v in range(V):
            if g.outcome[v] is target:
                win[v, :, :] = True
                rank[v, :, :] = 0

        def hindex(h: Optional[Player]) -> int:
            return 0 if h is None else HOLDER_INDEX[h]

        def post_move_good(winner: Player, v: int, a2: int, h2: Optional[Player]) -> bool:
            my, their = (red, blue) if winner is Player.ALICE else (blue, red)
            # Winner's elections: move self, or force the opponent.  The
            # elected mover picks their own edge, optimizing for THEIR side;
            # the winner then picks the election best for the winner.
            hi = hindex(h2)
            options = []
            if my[v]:
                vals = [win[t, a2, hi] for t in my[v]]
                options.append(any(vals) if winner is player else all(vals))
            if their[v]:
                vals = [win[t, a2, hi] for t in their[v]]
                options.append(all(vals) if winner is player else any(vals))
            if not options:
                return False
            return bool(max(options) if winner is player else min(options))

        changed = True
        it = 0
        while changed:
            changed = False
            it += 1
            for v in range(V):
                if g.outcome[v] is not None:
                    continue
                for a in range(k + 1):
                    holders: tuple[Optional[Player], ...]
                    holders = (None,) if rule is Rule.LADIES_FIRST else (
                        Player.ALICE,
                        Player.BOB,
                    )
                    for h in holders:
                        hi = hindex(h)
                        if win[v, a, hi]:
                            continue
                        mine = a if player is Player.ALICE else k - a
                        theirs = k - mine
                        found = False
                        for x in range(mine + 1):
                            ok = True
                            for y in range(theirs + 1):
                                bids = (x, y) if player is Player.ALICE else (y, x)
                                branches = _resolutions(rule, k, a, h, *bids)
                                vals = [
                                    post_move_good(w, v, a2, h2) for (w, a2, h2) in branches
                                ]
                                if len(vals) == 1:
                                    good = vals[0]
                                else:
                                    # standard tie: the holder picks a branch
                                    chooser = h
                                    good = max(vals) if chooser is player else min(vals)
                                if not good:
                                    ok = False
                                    break
                            if ok:
                                found = True
                                break
                        if found:
                            win[v, a, hi] = True
                            rank[v, a, hi] = it
                            changed = True
        return win, rank

    aw, ar = solve_for(Player.ALICE)
    bw, br = solve_for(Player.BOB)
    return OutcomeTable(g, k, rule, aw, bw, ar, br)


# -- vectorized solver -------------------------------------------------------


def _pad_adjacency(adj: Sequence[Sequence[int]], sentinel: int) -> np.ndarray:
    dmax = max((len(t) for t in adj), default=0)
    arr = np.full((len(adj), max(dmax, 1)), sentinel, dtype=np.int64)
    for v, targets in enumerate(adj):
        for i, t in enumerate(targets):
            arr[v, i] = t
    return arr


def _solve_player(
    g: GameGraph,
    k: int,
    rule: Rule,
    player: Player,
    red: Sequence[Sequence[int]],
    blue: Sequence[Sequence[int]],
    election_masks: Optional[dict[Player, tuple[Sequence[bool], Sequence[bool]]]] = None,
) -> tuple[np.ndarray, np.ndarray]:
    V = g.num_vertices
    K1 = k + 1
    H = _holder_count(rule)
    target = Outcome.ALICE_WIN if player is Player.ALICE else Outcome.BOB_WIN

    def masks_for(p: Player) -> tuple[np.ndarray, np.ndarray]:
        if election_masks and p in election_masks:
            allow_self, allow_force = election_masks[p]
            return (
                np.asarray(allow_self, dtype=bool)[:, None, None],
                np.asarray(allow_force, dtype=bool)[:, None, None],
            )
        full = np.ones((V, 1, 1), dtype=bool)
        return full, full

    self_a, force_a = masks_for(Player.ALICE)
    self_b, force_b = masks_for(Player.BOB)

    red_pad = _pad_adjacency(red, V)
    blue_pad = _pad_adjacency(blue, V)
    has_red = np.array([bool(t) for t in red], dtype=bool)[:, None, None]
    has_blue = np.array([bool(t) for t in blue], dtype=bool)[:, None, None]
    terminal = np.array([g.outcome[v] is not None for v in range(V)], dtype=bool)

    win = np.zeros((V, K1, H), dtype=bool)
    rank = np.full((V, K1, H), UNRANKED, dtype=np.int32)
    for v in range(V):
        if g.outcome[v] is target:
            win[v, :, :] = True
            rank[v, :, :] = 0

    c_idx = np.arange(K1)
    SUB = c_idx[:, None] - c_idx[None, :]
    ADD = c_idx[:, None] + c_idx[None, :]
    valid_pay = SUB >= 0
    valid_tie = ADD <= k
    SUBc = np.clip(SUB, 0, k)
    ADDc = np.clip(ADD, 0, k)
    ADD1c = np.clip(ADD + 1, 0, K1)
    X0 = c_idx[None, :] == 0

    me = HOLDER_INDEX[player] if H == 2 else 0
    them = 1 - me if H == 2 else 0

    def opt(arr: np.ndarray) -> np.ndarray:
        # reindex a [V, K1] chip axis from Alice-chips to optimizer-chips
        return arr if player is Player.ALICE else arr[:, ::-1]

    max_iters = V * K1 * H + 2
    for it in range(1, max_iters + 1):
        ext_f = np.concatenate([win, np.zeros((1, K1, H), dtype=bool)], axis=0)
        ext_t = np.concatenate([win, np.ones((1, K1, H), dtype=bool)], axis=0)
        ex_red = ext_f[red_pad].any(axis=1)
        all_red = ext_t[red_pad].all(axis=1)
        ex_blue = ext_f[blue_pad].any(axis=1)
        all_blue = ext_t[blue_pad].all(axis=1)
        # A winner elects among their allowed options (move self, or force
        # the opponent, whose own mover still picks the edge); the adversary
        # as winner picks the allowed option worst for the optimizer.
        if player is Player.ALICE:
            a_self = has_red & self_a
            a_force = has_blue & force_a
            wv = (a_self & ex_red) | (a_force & all_blue)
            b_self = has_blue & self_b
            b_force = has_red & force_b
            lv = (~b_self | all_blue) & (~b_force | ex_red) & (b_self | b_force)
        else:
            b_self = has_blue & self_b
            b_force = has_red & force_b
            wv = (b_self & ex_blue) | (b_force & all_red)
            a_self = has_red & self_a
            a_force = has_blue & force_a
            lv = (~a_self | all_red) & (~a_force | ex_blue) & (a_self | a_force)

        good = np.zeros((V, K1, H), dtype=bool)
        for h in range(H):
            if rule is Rule.STANDARD:
                w_non = opt(wv[:, :, h])
                l_non = opt(lv[:, :, h])
                if h == me:
                    tie = opt(wv[:, :, them])[:, SUBc] | opt(lv[:, :, me])[:, ADDc]
                else:
                    tie = opt(wv[:, :, them])[:, SUBc] & opt(lv[:, :, me])[:, ADDc]
            elif rule in (Rule.MAKE_IT_TAKE_IT, Rule.LOSERS_BALL):
                w_non = opt(wv[:, :, them])  # loser (adversary) takes the token
                l_non = opt(lv[:, :, me])
                if rule is Rule.MAKE_IT_TAKE_IT:
                    tie = (
                        opt(lv[:, :, me])[:, ADDc]
                        if h == me
                        else opt(wv[:, :, them])[:, SUBc]
                    )
                else:
                    tie = (
                        opt(wv[:, :, them])[:, SUBc]
                        if h == me
                        else opt(lv[:, :, me])[:, ADDc]
                    )
            else:  # ladies first
                w_non = opt(wv[:, :, 0])
                l_non = opt(lv[:, :, 0])
                if player is Player.ALICE:
                    tie = w_non[:, SUBc]
                else:
                    tie = l_non[:, ADDc]

            suf = np.logical_and.accumulate(l_non[:, ::-1], axis=1)[:, ::-1]
            suf = np.concatenate([suf, np.ones((V, 1), dtype=bool)], axis=1)
            m = (X0 | w_non[:, SUBc]) & (~valid_tie | tie) & suf[:, ADD1c] & valid_pay
            good[:, :, h] = opt(m.any(axis=2))

        new = good & ~win & ~terminal[:, None, None]
        if not new.any():
            break
        rank[new] = it
        win |= new
    else:
        raise AssertionError("fixed point failed to stabilize")
    return win, rank


def solve_chip_states(
    g: GameGraph,
    k: int,
    rule: Rule = Rule.STANDARD,
    red_filter: Optional[MoveFilter] = None,
    blue_filter: Optional[MoveFilter] = None,
    state_cap: int = DEFAULT_STATE_CAP,
    election_masks: Optional[dict[Player, tuple[Sequence[bool], Sequence[bool]]]] = None,
) -> OutcomeTable:
    """Classify every chip state of ``g`` at chip total ``k``."""
    if k < 0:
        raise ValueError("chip total must be >= 0")
    H = _holder_count(rule)
    if g.num_vertices * (k + 1) * H > state_cap:
        raise ValueError(
            f"state space {g.num_vertices * (k + 1) * H} exceeds cap {state_cap}; "
            "reduce k or raise the cap"
        )
    red, blue = _adjacency(g, red_filter, blue_filter)
    aw, ar = _solve_player(g, k, rule, Player.ALICE, red, blue, election_masks)
    bw, br = _solve_player(g, k, rule, Player.BOB, red, blue, election_masks)
    return OutcomeTable(g, k, rule, aw, bw, ar, br)


def stable_restriction(
    g: GameGraph, profile
) -> tuple[dict[int, list[int]], dict[int, list[int]], dict[Player, tuple[list[bool], list[bool]]]]:
    """Value-optimal move sets and election masks for both players.

    A stable player only moves to positions optimizing the real-bidding
    value, and as bid winner only elects the option (move self / force the
    opponent) whose reached value is optimal for them; forcing hands the
    move to the opponent, who will realize their own value optimum.
    """
    alice_allowed: dict[int, list[int]] = {}
    bob_allowed: dict[int, list[int]] = {}
    a_self = [True] * g.num_vertices
    a_force = [True] * g.num_vertices
    b_self = [True] * g.num_vertices
    b_force = [True] * g.num_vertices
    for v in range(g.num_vertices):
        if g.outcome[v] is not None:
            continue
        red_r = [profile.r[t] for t in g.red[v]]
        blue_r = [profile.r[t] for t in g.blue[v]]
        ra = min(red_r) if red_r else None
        rb = max(blue_r) if blue_r else None
        if red_r:
            alice_allowed[v] = [t for t in g.red[v] if profile.r[t] == ra]
        if blue_r:
            bob_allowed[v] = [t for t in g.blue[v] if profile.r[t] == rb]
        # Alice-as-winner reaches ra by moving, rb by forcing; she prefers
        # the minimum.  Bob symmetrically prefers the maximum.
        if red_r and blue_r:
            a_self[v], a_force[v] = ra <= rb, rb <= ra
            b_self[v], b_force[v] = rb >= ra, ra >= rb
        elif red_r:
            a_self[v], a_force[v] = True, False
            b_self[v], b_force[v] = False, True
        else:
            a_self[v], a_force[v] = False, True
            b_self[v], b_force[v] = True, False
    masks = {Player.ALICE: (a_self, a_force), Player.BOB: (b_self, b_force)}
    return alice_allowed, bob_allowed, masks


def solve_restricted(
    g: GameGraph,
    k: int,
    rule: Rule,
    alice_allowed: Optional[dict[int, Sequence[int]]] = None,
    bob_allowed: Optional[dict[int, Sequence[int]]] = None,
    state_cap: int = DEFAULT_STATE_CAP,
    election_masks: Optional[dict[Player, tuple[Sequence[bool], Sequence[bool]]]] = None,
) -> OutcomeTable:
    """Solve with per-player move/election restrictions."""

    def mk(allowed: Optional[dict[int, Sequence[int]]]) -> Optional[MoveFilter]:
        if allowed is None:
            return None

        def flt(v: int, targets: Sequence[int]) -> Sequence[int]:
            if v not in allowed:
                return targets
            keep = [t for t in targets if t in set(allowed[v])]
            return keep or targets

        return flt

    return solve_chip_states(
        g, k, rule, mk(alice_allowed), mk(bob_allowed), state_cap, election_masks
    )


def solve_stable(
    g: GameGraph,
    k: int,
    rule: Rule,
    profile,
    players: Sequence[Player] = (Player.ALICE, Player.BOB),
    state_cap: int = DEFAULT_STATE_CAP,
) -> OutcomeTable:
    """Solve with the given players held to value-optimal moves and elections."""
    alice_allowed, bob_allowed, masks = stable_restriction(g, profile)
    return solve_restricted(
        g,
        k,
        rule,
        alice_allowed if Player.ALICE in players else None,
        bob_allowed if Player.BOB in players else None,
        state_cap,
        {p: masks[p] for p in players},
    )


_TABLE_CACHE: dict[tuple[int, int, Rule], OutcomeTable] = {}


def outcome(
    g: GameGraph,
    alice: ChipHolding,
    bob_amount: int,
    rule: Rule = Rule.STANDARD,
    holder: Optional[Player] = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> Verdict:
    """Single-state query; builds (and caches) the full table for its total.

    For token rules the holder is inferred from the marker on ``alice`` when
    not given explicitly (a plain holding means the opponent holds it).
    """
    if rule is Rule.LADIES_FIRST:
        holder = None
    elif holder is None:
        holder = Player.ALICE if alice.marker is not Marker.PLAIN else Player.BOB
    k = alice.amount + bob_amount
    key = (id(g), k, rule)
    table = _TABLE_CACHE.get(key)
    if table is None:
        table = solve_chip_states(g, k, rule, state_cap=state_cap)
        _TABLE_CACHE[key] = table
    return table.verdict(ChipState(g.start, alice.amount, k, holder))


# -- certified play from a solved table --------------------------------------


def _post_move_rank(
    table: OutcomeTable, player: Player, winner: Player, v: int, a2: int, h2: Optional[Player]
) -> tuple[int, Optional[str], Optional[int]]:
    """Worst-case rank after the bid winner's election, plus the witness.

    Returns (rank, election, move); rank UNRANKED means the optimizer can be
    pushed out of the win set.
    """
    g = table.graph
    rank = table.alice_rank if player is Player.ALICE else table.bob_rank
    hi = 0 if h2 is None else HOLDER_INDEX[h2]
    my, their = (g.red, g.blue) if winner is Player.ALICE else (g.blue, g.red)
    options: list[tuple[int, str, Optional[int]]] = []
    if my[v]:
        # Winner moves: picks their best edge (min rank when the winner is
        # the optimizer, max when the winner is the adversary).
        if winner is player:
            best = min(my[v], key=lambda t: int(rank[t, a2, hi]))
            options.append((int(rank[best, a2, hi]), "self", best))
        else:
            options.append((max(int(rank[t, a2, hi]) for t in my[v]), "self", None))
    if their[v]:
        # Forced opponent moves: they optimize for their own side.
        if winner is player:
            options.append(
                (max(int(rank[t, a2, hi]) for t in their[v]), "force_opponent", None)
            )
        else:
            best = min(their[v], key=lambda t: int(rank[t, a2, hi]))
            options.append((int(rank[best, a2, hi]), "force_opponent", best))
    if not options:
        return UNRANKED, None, None
    if winner is player:
        return min(options, key=lambda o: o[0])
    return max(options, key=lambda o: o[0])


def best_bid(table: OutcomeTable, state: ChipState, player: Player) -> tuple[int, Optional[bool]]:
    """A bid (and standard-rule tie policy) certified to make progress.

    Only valid when ``state`` is in the player's win set; every opposing
    reply then leads to a state of strictly smaller rank.
    """
    rule = table.rule
    hi = table._hidx(state.holder)
    rank_arr = table.alice_rank if player is Player.ALICE else table.bob_rank
    my_rank = int(rank_arr[state.vertex, state.alice, hi])
    if my_rank == UNRANKED:
        raise ValueError("best_bid called outside the winning region")
    mine = state.alice if player is Player.ALICE else state.bob
    theirs = state.k - mine
    for x in range(mine + 1):
        for tie_self in ((True, False) if rule is Rule.STANDARD else (None,)):
            ok = True
            for y in range(theirs + 1):
                bids = (x, y) if player is Player.ALICE else (y, x)
                branches = _resolutions(rule, state.k, state.alice, state.holder, *bids)
                if len(branches) == 2:
                    if state.holder is player:
                        branches = [branches[0] if tie_self else branches[1]]
                    # else: adversary chooses; both must be fine
                ranks = [
                    _post_move_rank(table, player, w, state.vertex, a2, h2)[0]
                    for (w, a2, h2) in branches
                ]
                if max(ranks) >= my_rank:
                    ok = False
                    break
            if ok:
                return x, tie_self
    raise AssertionError("no certified bid found inside the winning region")


def best_election(
    table: OutcomeTable, player: Player, winner: Player, v: int, a2: int, h2: Optional[Player]
) -> tuple[str, Optional[int]]:
    """Rank-minimizing election (and move, when electing self)."""
    rk, election, move = _post_move_rank(table, player, winner, v, a2, h2)
    if election is None:
        raise ValueError("no legal election")
    return election, move
