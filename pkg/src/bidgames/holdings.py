"""Chip holdings and the total orders used by discrete bidding.

A player's bidding stock is a nonnegative number of ordinary chips plus,
depending on the tie-breaking rule in force, at most one marker token: the
tie-breaking advantage (``STAR``) under the standard rule, or the tie-losing
token (``MINUS_EPS``) under make-it-take-it.  Each regime is totally ordered:

    standard:          0 < 0* < 1 < 1* < 2 < ...
    make-it-take-it:   0-e < 0 < 1-e < 1 < 2-e < ...

Both orders embed into the integers via :func:`holding_key` (plain ``a`` maps
to ``2a``, ``a*`` to ``2a + 1``, ``a-e`` to ``2a - 1``), which is the
representation the solvers use internally.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Marker(str, Enum):
    """Marker token attached to a holding, if any."""

    PLAIN = "plain"
    STAR = "star"
    MINUS_EPS = "minus_eps"


class Ordering(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True, order=False)
class ChipHolding:
    """A chip count plus an optional marker token.

    ``amount`` counts ordinary chips.  ``marker`` is ``STAR`` if the holder
    also has the tie-breaking advantage, ``MINUS_EPS`` if they hold the
    make-it-take-it token, and ``PLAIN`` otherwise.  Star and minus-eps
    markers never occur within the same rule regime.
    """

    amount: int
    marker: Marker = Marker.PLAIN

    def __post_init__(self) -> None:
        if self.amount < 0:
            raise ValueError(f"chip amount must be nonnegative, got {self.amount}")

    def key(self) -> int:
        """Order-embedding into the integers (shared by both regimes)."""
        if self.marker is Marker.STAR:
            return 2 * self.amount + 1
        if self.marker is Marker.MINUS_EPS:
            return 2 * self.amount - 1
        return 2 * self.amount

    def __str__(self) -> str:
        if self.marker is Marker.STAR:
            return f"{self.amount}*"
        if self.marker is Marker.MINUS_EPS:
            return f"{self.amount}-e"
        return str(self.amount)


def holding_key(h: ChipHolding) -> int:
    return h.key()


def parse_holding(text: str) -> ChipHolding:
    """Parse ``"4"``, ``"4*"`` or ``"4-e"`` into a holding."""
    text = text.strip()
    if text.endswith("-e"):
        return ChipHolding(int(text[:-2]), Marker.MINUS_EPS)
    if text.endswith("*"):
        return ChipHolding(int(text[:-1]), Marker.STAR)
    return ChipHolding(int(text))


def _same_regime(x: ChipHolding, y: ChipHolding) -> bool:
    markers = {x.marker, y.marker}
    return not ({Marker.STAR, Marker.MINUS_EPS} <= markers)


def compare_holdings(x: ChipHolding, y: ChipHolding) -> Ordering:
    """Compare two holdings in their regime's total order.

    Mixing a star holding with a minus-eps holding is rejected: the two
    regimes do not share an order.
    """
    if not _same_regime(x, y):
        raise ValueError(f"cannot compare holdings from different regimes: {x}, {y}")
    kx, ky = x.key(), y.key()
    if kx < ky:
        return Ordering.LESS
    if kx > ky:
        return Ordering.GREATER
    return Ordering.EQUAL
