"""Live play sessions: the bidding protocol as an explicit state machine.

A round is: both players commit sealed bids; the round resolves (with a tie
choice for the advantage holder under the standard rule); the bid winner
elects to move or to force the opponent; the elected mover picks a move.
Every decision appends an event, and folding the event list over a fresh
session reproduces the state (replay determinism).

The AI plays certified actions from a solved chip-state table whenever the
state space fits, falls back to the bounded-game threshold tables under the
standard and make-it-take-it rules, and otherwise bids the value-optimal
fraction (a documented heuristic for lost or oversized positions).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .bidding import Player, Rule, resolve_nontie, resolve_tie_auto, resolve_tie_standard
from .gamespec import parse_game
from .graphs import GameGraph, Outcome, reverse
from .holdings import ChipHolding, Marker, parse_holding
from .oracle import (
    ChipState,
    OutcomeTable,
    Verdict,
    best_bid,
    best_election,
    solve_chip_states,
)
from .richman import RichmanProfile, richman_values
from .thresholds import THRESHOLD_RULES, threshold_keys
from . import ttt as tttmod

SESSION_SCHEMA = "bidsession-1"
AI_ORACLE_CAP = 400_000


class Phase(str, Enum):
    AWAITING_BIDS = "awaiting_bids"
    AWAITING_TIE_CHOICE = "awaiting_tie_choice"
    AWAITING_ELECTION = "awaiting_election"
    AWAITING_MOVE = "awaiting_move"
    FINISHED = "finished"


class PlayError(ValueError):
    """Illegal session operation (wrong phase, wrong actor, bad value)."""


@dataclass
class SessionConfig:
    game: str  # game-spec string
    k: int
    alice_amount: int
    advantage: Optional[Player]  # token holder (None only for ladies-first)
    rule: Rule = Rule.STANDARD
    ai_controls: frozenset[Player] = frozenset()
    hints: bool = False

    def to_json_obj(self) -> dict:
        return {
            "game": self.game,
            "k": self.k,
            "alice_amount": self.alice_amount,
            "advantage": self.advantage.value if self.advantage else None,
            "rule": self.rule.value,
            "ai_controls": sorted(p.value for p in self.ai_controls),
            "hints": self.hints,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "SessionConfig":
        return cls(
            game=obj["game"],
            k=obj["k"],
            alice_amount=obj["alice_amount"],
            advantage=Player(obj["advantage"]) if obj.get("advantage") else None,
            rule=Rule(obj.get("rule", "standard")),
            ai_controls=frozenset(Player(p) for p in obj.get("ai_controls", [])),
            hints=bool(obj.get("hints", False)),
        )

    @staticmethod
    def parse_split(split: str) -> tuple[int, Optional[Player]]:
        """``"4*/4"`` -> Alice's chips and the token holder."""
        left, _, right = split.partition("/")
        if not right:
            raise PlayError(f"bad split {split!r}; want e.g. 4*/4")
        a, b = parse_holding(left), parse_holding(right)
        holder: Optional[Player] = None
        if a.marker is not Marker.PLAIN and b.marker is not Marker.PLAIN:
            raise PlayError("both sides marked in split")
        if a.marker is not Marker.PLAIN:
            holder = Player.ALICE
        elif b.marker is not Marker.PLAIN:
            holder = Player.BOB
        return a.amount, holder


class PlaySession:
    """Single mutable game session; operations serialize through the owner."""

    def __init__(self, config: SessionConfig, graph: GameGraph | None = None):
        if config.k < 0 or not 0 <= config.alice_amount <= config.k:
            raise PlayError("inconsistent chip counts")
        if config.rule is Rule.LADIES_FIRST:
            if config.advantage is not None:
                raise PlayError("ladies-first has no advantage token")
        elif config.advantage is None:
            raise PlayError(f"rule {config.rule.value} needs a token holder")
        self.config = config
        self.graph = graph if graph is not None else parse_game(config.game)
        self.rule = config.rule
        self.k = config.k
        self.position = self.graph.start
        self.alice = config.alice_amount
        self.holder = config.advantage
        self.phase = Phase.AWAITING_BIDS
        self.pending_bids: dict[Player, int] = {}
        self.bid_winner: Optional[Player] = None
        self.tie_amount: Optional[int] = None
        self.forced_mover: Optional[Player] = None
        self.outcome: Optional[Verdict] = None
        self.history: list[dict] = []
        self.round = 0
        self.board = tttmod.EMPTY_BOARD if self.graph.kind.startswith("ttt") else None
        self._ai = _AIPolicy(self)
        self._check_terminal_start()

    # -- basic accessors ------------------------------------------------

    @property
    def bob(self) -> int:
        return self.k - self.alice

    def chips(self, p: Player) -> int:
        return self.alice if p is Player.ALICE else self.bob

    def chip_state(self) -> ChipState:
        return ChipState(self.position, self.alice, self.k, self.holder)

    def _check_terminal_start(self) -> None:
        out = self.graph.outcome[self.position]
        if out is not None:
            self._finish(out)

    def _finish(self, out: Outcome) -> None:
        self.phase = Phase.FINISHED
        self.outcome = {
            Outcome.ALICE_WIN: Verdict.ALICE_WIN,
            Outcome.BOB_WIN: Verdict.BOB_WIN,
            Outcome.TIE: Verdict.DRAW,
        }[out]

    def actor(self) -> Optional[Player]:
        """Whose decision the session is waiting on (None when finished)."""
        if self.phase is Phase.AWAITING_BIDS:
            for p in (Player.ALICE, Player.BOB):
                if p not in self.pending_bids:
                    return p
            return None
        if self.phase is Phase.AWAITING_TIE_CHOICE:
            return self.holder
        if self.phase is Phase.AWAITING_ELECTION:
            return self.bid_winner
        if self.phase is Phase.AWAITING_MOVE:
            return self.forced_mover
        return None

    def legal_moves(self, p: Player) -> list[int]:
        targets = self.graph.red[self.position] if p is Player.ALICE else self.graph.blue[self.position]
        return list(targets)

    def legal_cells(self, p: Player) -> list[int]:
        if self.board is None:
            raise PlayError("not a board game")
        return [c for c in range(9) if self.board[c] == "."]

    # -- protocol operations ---------------------------------------------

    def submit_bid(self, player: Player, bid: int) -> None:
        if self.phase is not Phase.AWAITING_BIDS:
            raise PlayError(f"cannot bid in phase {self.phase.value}")
        if player in self.pending_bids:
            raise PlayError(f"{player.value} already bid this round")
        if not 0 <= bid <= self.chips(player):
            raise PlayError(f"bid {bid} outside 0..{self.chips(player)}")
        self.pending_bids[player] = bid
        if len(self.pending_bids) == 2:
            self._reveal()

    def _reveal(self) -> None:
        x, y = self.pending_bids[Player.ALICE], self.pending_bids[Player.BOB]
        self.history.append({"type": "bids", "alice": x, "bob": y})
        if x != y:
            winner = Player.ALICE if x > y else Player.BOB
            pay = max(x, y)
            self._transfer(winner, pay)
            self.holder = resolve_nontie(self.rule, self.holder, winner)
            self._to_election(winner)
        elif self.rule is Rule.STANDARD:
            self.tie_amount = x
            self.phase = Phase.AWAITING_TIE_CHOICE
        else:
            winner, holder = resolve_tie_auto(self.rule, self.holder)
            self._transfer(winner, x)
            self.holder = holder
            self.history.append({"type": "tie_auto", "winner": winner.value})
            self._to_election(winner)
        self.pending_bids = {}

    def resolve_tie(self, player: Player, self_win: bool) -> None:
        if self.phase is not Phase.AWAITING_TIE_CHOICE:
            raise PlayError(f"no tie to resolve in phase {self.phase.value}")
        if player is not self.holder:
            raise PlayError("only the advantage holder resolves ties")
        assert self.tie_amount is not None and self.holder is not None
        winner, holder = resolve_tie_standard(self.holder, self_win)
        self._transfer(winner, self.tie_amount)
        self.holder = holder
        self.history.append(
            {"type": "tie_choice", "holder": player.value, "self_win": self_win}
        )
        self.tie_amount = None
        self._to_election(winner)

    def _transfer(self, winner: Player, pay: int) -> None:
        if winner is Player.ALICE:
            self.alice -= pay
        else:
            self.alice += pay
        assert 0 <= self.alice <= self.k

    def _to_election(self, winner: Player) -> None:
        self.bid_winner = winner
        self.phase = Phase.AWAITING_ELECTION
        self.round += 1

    def elect_and_move(
        self,
        player: Player,
        election: str,
        move: Optional[int] = None,
        cell: Optional[int] = None,
    ) -> None:
        """Election by the bid winner, or the forced player's move.

        In the election phase ``election`` is ``"self"`` (with the move) or
        ``"force_opponent"``; in the forced-move phase only ``"self"`` with
        a move is accepted.
        """
        if self.phase is Phase.AWAITING_ELECTION:
            if player is not self.bid_winner:
                raise PlayError("only the bid winner elects")
            if election == "self":
                self.history.append({"type": "election", "by": player.value, "election": "self"})
                self._apply_move(player, move, cell)
                return
            if election == "force_opponent":
                opponent = player.other
                if not self.legal_moves(opponent):
                    raise PlayError("opponent has no move to be forced into")
                self.history.append(
                    {"type": "election", "by": player.value, "election": "force_opponent"}
                )
                self.forced_mover = opponent
                self.phase = Phase.AWAITING_MOVE
                return
            raise PlayError(f"unknown election {election!r}")
        if self.phase is Phase.AWAITING_MOVE:
            if player is not self.forced_mover:
                raise PlayError("not the forced mover")
            if election != "self":
                raise PlayError("forced player can only move")
            self._apply_move(player, move, cell)
            self.forced_mover = None
            return
        raise PlayError(f"cannot move in phase {self.phase.value}")

    def _apply_move(self, player: Player, move: Optional[int], cell: Optional[int]) -> None:
        if self.board is not None:
            if cell is None:
                raise PlayError("board games take moves as cells")
            mark = "A" if player is Player.ALICE else "B"
            new_board = tttmod.place(self.board, cell, mark)
            target = self.graph.labels.index(tttmod.canonical(new_board))
            if target not in self.legal_moves(player):
                raise PlayError("illegal placement")
            self.board = new_board
            self.history.append(
                {"type": "move", "by": player.value, "to": target, "cell": cell}
            )
        else:
            if move is None:
                raise PlayError("move target required")
            if move not in self.legal_moves(player):
                raise PlayError(f"illegal move to vertex {move}")
            target = move
            self.history.append({"type": "move", "by": player.value, "to": target})
        self.position = target
        out = self.graph.outcome[target]
        if out is not None:
            self._finish(out)
        else:
            self.phase = Phase.AWAITING_BIDS
            self.bid_winner = None

    # -- AI ----------------------------------------------------------------

    def _ai_pending(self) -> Optional[Player]:
        if self.phase is Phase.AWAITING_BIDS:
            # Sealed bids: an AI side commits as soon as its bid is missing.
            for p in (Player.ALICE, Player.BOB):
                if p in self.config.ai_controls and p not in self.pending_bids:
                    return p
            return None
        a = self.actor()
        return a if a is not None and a in self.config.ai_controls else None

    def ai_due(self) -> bool:
        return self._ai_pending() is not None

    def ai_step(self) -> None:
        """Perform exactly one pending AI decision."""
        a = self._ai_pending()
        if a is None:
            raise PlayError("no AI decision pending")
        self._ai.act(a)

    def run_ai(self, max_steps: int = 10_000) -> None:
        steps = 0
        while self.ai_due() and steps < max_steps:
            self.ai_step()
            steps += 1

    # -- serialization ------------------------------------------------------

    def to_document(self) -> dict:
        doc = {
            "version": SESSION_SCHEMA,
            "config": self.config.to_json_obj(),
            "events": list(self.history),
            "state": {
                "phase": self.phase.value,
                "position": self.position,
                "position_label": self.graph.labels[self.position],
                "board": self.board,
                "alice": self.alice,
                "bob": self.bob,
                "advantage": self.holder.value if self.holder else None,
                "round": self.round,
                "outcome": self.outcome.value if self.outcome else None,
                "actor": self.actor().value if self.actor() else None,
                "bids_submitted": sorted(p.value for p in self.pending_bids),
            },
        }
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_document(), sort_keys=True)


def replay(config: SessionConfig, events: list[dict], graph: GameGraph | None = None) -> PlaySession:
    """Fold an event log over a fresh session."""
    s = PlaySession(config, graph=graph)
    for ev in events:
        if ev["type"] == "bids":
            s.submit_bid(Player.ALICE, ev["alice"])
            s.submit_bid(Player.BOB, ev["bob"])
        elif ev["type"] == "tie_choice":
            s.resolve_tie(Player(ev["holder"]), ev["self_win"])
        elif ev["type"] == "tie_auto":
            pass  # consequence of the bids event
        elif ev["type"] == "election":
            if ev["election"] == "force_opponent":
                s.elect_and_move(Player(ev["by"]), "force_opponent")
        elif ev["type"] == "move":
            s.elect_and_move(Player(ev["by"]), "self", move=ev.get("to"), cell=ev.get("cell"))
        else:
            raise PlayError(f"unknown event {ev['type']!r}")
    return s


class _AIPolicy:
    """Decision source for AI-controlled sides.

    Prefers certified actions from a solved chip-state table; for bounded
    games whose state space is too big, falls back to threshold tables
    (standard / make-it-take-it); otherwise bids the value-optimal
    proportion, which is a heuristic and marked as such.
    """

    def __init__(self, session: PlaySession):
        self.s = session
        self._oracle: Optional[OutcomeTable] = None
        self._oracle_tried = False
        self._keys: dict[Player, list] = {}
        self._profile: Optional[RichmanProfile] = None
        self._rev_graph: Optional[GameGraph] = None
        self._tie_plan: dict[Player, Optional[bool]] = {}

    def oracle(self) -> Optional[OutcomeTable]:
        if not self._oracle_tried:
            self._oracle_tried = True
            g, k = self.s.graph, self.s.k
            if g.num_vertices * (k + 1) * 2 <= AI_ORACLE_CAP:
                self._oracle = solve_chip_states(g, k, self.s.rule)
        return self._oracle

    def threshold_keys_for(self, p: Player):
        if self.s.rule not in THRESHOLD_RULES or self.s.graph.bounded_depth is None:
            return None
        if p not in self._keys:
            if p is Player.ALICE:
                self._keys[p] = threshold_keys(self.s.graph, self.s.k, self.s.rule)
            else:
                if self._rev_graph is None:
                    self._rev_graph = reverse(self.s.graph)
                self._keys[p] = threshold_keys(self._rev_graph, self.s.k, self.s.rule)
        return self._keys[p]

    def profile(self) -> RichmanProfile:
        if self._profile is None:
            self._profile = richman_values(self.s.graph)
        return self._profile

    def _holding_key(self, p: Player) -> int:
        amt = self.s.chips(p)
        if self.s.rule is Rule.LADIES_FIRST:
            return 2 * amt
        has_token = self.s.holder is p
        if self.s.rule is Rule.STANDARD:
            return 2 * amt + (1 if has_token else 0)
        return 2 * amt - (1 if has_token else 0)

    def act(self, p: Player) -> None:
        s = self.s
        if s.phase is Phase.AWAITING_BIDS:
            bid, tie_self = self._choose_bid(p)
            self._tie_plan[p] = tie_self
            s.submit_bid(p, bid)
        elif s.phase is Phase.AWAITING_TIE_CHOICE:
            plan = self._tie_plan.get(p)
            if plan is None:
                plan = self._tie_fallback(p)
            s.resolve_tie(p, plan)
            self._tie_plan.pop(p, None)
        elif s.phase in (Phase.AWAITING_ELECTION, Phase.AWAITING_MOVE):
            election, move = self._choose_election(p)
            if s.board is not None and move is not None:
                cell = self._cell_for_target(p, move)
                s.elect_and_move(p, election, cell=cell)
            else:
                s.elect_and_move(p, election, move=move)

    def _cell_for_target(self, p: Player, target: int) -> int:
        mark = "A" if p is Player.ALICE else "B"
        assert self.s.board is not None
        for c in range(9):
            if self.s.board[c] == ".":
                if self.s.graph.labels.index(
                    tttmod.canonical(tttmod.place(self.s.board, c, mark))
                ) == target:
                    return c
        raise PlayError("no cell realizes the chosen target")

    def _choose_bid(self, p: Player) -> tuple[int, Optional[bool]]:
        s = self.s
        table = self.oracle()
        if table is not None:
            st = s.chip_state()
            winning = (
                table.alice_win[st.vertex, st.alice, table._hidx(st.holder)]
                if p is Player.ALICE
                else table.bob_win[st.vertex, st.alice, table._hidx(st.holder)]
            )
            if winning:
                return best_bid(table, st, p)
        keys = self.threshold_keys_for(p)
        if keys is not None:
            key = keys[s.position]
            if key is not None and self._holding_key(p) >= key:
                from .thresholds import optimal_action

                g = s.graph if p is Player.ALICE else self._rev_graph
                assert g is not None
                holding_amt = s.chips(p)
                marker = Marker.PLAIN
                if s.rule is Rule.STANDARD and s.holder is p:
                    marker = Marker.STAR
                if s.rule is Rule.MAKE_IT_TAKE_IT and s.holder is p:
                    marker = Marker.MINUS_EPS
                act = optimal_action(
                    g, s.position, s.k, ChipHolding(holding_amt, marker), s.rule, keys
                )
                return act.bid, act.use_advantage_on_tie
        # Heuristic: bid the value-optimal proportion of the pot.
        prof = self.profile()
        delta = prof.delta[s.position] or 0
        bid = min(s.chips(p), round(float(delta) * s.k))
        return bid, True

    def _tie_fallback(self, p: Player) -> bool:
        return (self.s.tie_amount or 0) > 0

    def _choose_election(self, p: Player) -> tuple[str, Optional[int]]:
        s = self.s
        if s.phase is Phase.AWAITING_MOVE:
            return "self", self._choose_move(p)
        table = self.oracle()
        if table is not None:
            st = s.chip_state()
            hi = table._hidx(st.holder)
            winning = (
                table.alice_win[st.vertex, st.alice, hi]
                if p is Player.ALICE
                else table.bob_win[st.vertex, st.alice, hi]
            )
            if winning:
                return best_election(table, p, p, st.vertex, st.alice, st.holder)
        keys = self.threshold_keys_for(p)
        if keys is not None:
            g = s.graph if p is Player.ALICE else self._rev_graph
            assert g is not None
            my, their = g.red[s.position], g.blue[s.position]
            if my:
                fa = min(keys[t] for t in my)
                fb = max((keys[t] for t in their), default=fa)
                if their and fb < fa:
                    return "force_opponent", None
                best = min(my, key=lambda t: keys[t])
                return "self", best
            return "force_opponent", None
        return self._value_election(p)

    def _choose_move(self, p: Player) -> int:
        s = self.s
        table = self.oracle()
        moves = s.legal_moves(p)
        if table is not None:
            rank = table.alice_rank if p is Player.ALICE else table.bob_rank
            hi = table._hidx(s.holder)
            return min(moves, key=lambda t: int(rank[t, s.alice, hi]))
        keys = self.threshold_keys_for(p)
        if keys is not None and p is Player.ALICE:
            return min(moves, key=lambda t: keys[t])
        if keys is not None:
            rev_keys = keys  # reversed-game keys: Bob minimizes his own threshold
            return min(moves, key=lambda t: rev_keys[t])
        prof = self.profile()
        if p is Player.ALICE:
            return min(moves, key=lambda t: prof.r[t])
        return max(moves, key=lambda t: prof.r[t])

    def _value_election(self, p: Player) -> tuple[str, Optional[int]]:
        s = self.s
        prof = self.profile()
        my = s.legal_moves(p)
        their = s.legal_moves(p.other)
        if not my:
            return "force_opponent", None
        if p is Player.ALICE:
            ra = min(float(prof.r[t]) for t in my)
            rb = max((float(prof.r[t]) for t in their), default=ra)
            if their and rb < ra:
                return "force_opponent", None
            return "self", min(my, key=lambda t: prof.r[t])
        rb = max(float(prof.r[t]) for t in my)
        ra = min((float(prof.r[t]) for t in their), default=rb)
        if their and rb < ra:
            return "force_opponent", None
        return "self", max(my, key=lambda t: prof.r[t])
