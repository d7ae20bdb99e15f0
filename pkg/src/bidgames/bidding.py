"""Tie-breaking rules and the pure round-resolution semantics.

One bidding round: both players commit integer bids up to their chips, the
higher bidder pays their bid to the other and elects who moves.  Tied chip
counts resolve per rule:

* ``STANDARD``: the advantage holder either self-declares (pays, token
  passes) or awards the bid (opponent pays, token stays).
* ``MAKE_IT_TAKE_IT``: the previous bid winner wins ties; the token (held by
  the previous loser) marks who loses them.  After every round the token
  sits with the bid loser.
* ``LOSERS_BALL``: the previous bid loser wins ties; same token flow.
* ``LADIES_FIRST``: Alice wins every tie; no token exists.

These helpers are shared by the oracle, the threshold-action verifier, and
the play engine so the protocol has a single source of truth.
"""

from __future__ import annotations

from enum import Enum
from typing import Optional


class Rule(str, Enum):
    STANDARD = "standard"
    MAKE_IT_TAKE_IT = "make_it_take_it"
    LOSERS_BALL = "losers_ball"
    LADIES_FIRST = "ladies_first"


class Player(str, Enum):
    ALICE = "alice"
    BOB = "bob"

    @property
    def other(self) -> "Player":
        return Player.BOB if self is Player.ALICE else Player.ALICE


TOKEN_RULES = (Rule.STANDARD, Rule.MAKE_IT_TAKE_IT, Rule.LOSERS_BALL)


def holder_choices_on_tie(rule: Rule) -> bool:
    """Whether the token holder has a decision to make on tied bids."""
    return rule is Rule.STANDARD


def resolve_nontie(rule: Rule, holder: Optional[Player], winner: Player) -> Optional[Player]:
    """Token holder after a strictly-won bid."""
    if rule is Rule.STANDARD:
        return holder
    if rule in (Rule.MAKE_IT_TAKE_IT, Rule.LOSERS_BALL):
        return winner.other  # loser takes the token
    return None


def resolve_tie_auto(rule: Rule, holder: Optional[Player]) -> tuple[Player, Optional[Player]]:
    """Winner and token holder after a tie, for rules with no choice."""
    if rule is Rule.MAKE_IT_TAKE_IT:
        assert holder is not None
        return holder.other, holder  # holder lost the previous bid, loses ties
    if rule is Rule.LOSERS_BALL:
        assert holder is not None
        return holder, holder.other
    if rule is Rule.LADIES_FIRST:
        return Player.ALICE, None
    raise ValueError("standard-rule ties need the holder's choice")


def resolve_tie_standard(holder: Player, self_win: bool) -> tuple[Player, Player]:
    """Winner and token holder for a standard-rule tie choice."""
    if self_win:
        return holder, holder.other  # holder pays and passes the token
    return holder.other, holder  # opponent pays, holder keeps the token
