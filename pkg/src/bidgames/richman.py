"""Exact real-bidding values: per-vertex critical fractions.

``R(v)`` is the fraction of the total bidding resources above which Alice
wins from ``v`` with real-valued bidding: 0 at her winning terminals, 1 at
every other terminal (a tie counts as a non-win), and the average of the
mover-optimal child values elsewhere.  ``delta`` is the optimal real bid,
and a vertex is zugzwang when Bob's best move value drops below Alice's
(both players then prefer to force the other to move).

Bounded games get exact backward induction.  Finite cyclic games get float
value iteration started from 1 on non-terminals (so the iterates at the
start vertex walk down the truncation values), followed by best-rational
reconstruction and an exact fixed-point verification.

``random_turn_value`` computes the fair-coin move-order win probability,
which complements the critical fraction to 1 and is used as an independent
cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .graphs import GameGraph, Outcome, topological_order


@dataclass(frozen=True)
class RichmanProfile:
    """Per-vertex exact values; entries are None for unreachable vertices."""

    r: tuple[Optional[Fraction], ...]
    r_a: tuple[Optional[Fraction], ...]
    r_b: tuple[Optional[Fraction], ...]
    delta: tuple[Optional[Fraction], ...]
    zugzwang: tuple[bool, ...]
    p: Optional[tuple[Optional[Fraction], ...]] = None  # random-turn values

    def start_value(self, g: GameGraph) -> Fraction:
        v = self.r[g.start]
        assert v is not None
        return v


class ReconstructionError(ValueError):
    """Exact reconstruction failed; carries the float profile for diagnosis."""

    def __init__(self, message: str, float_values: dict[int, float]):
        super().__init__(message)
        self.float_values = float_values


def _terminal_r(out: Outcome) -> Fraction:
    return Fraction(0) if out is Outcome.ALICE_WIN else Fraction(1)


def _profile_from_r(
    g: GameGraph, r: Sequence[Optional[Fraction]], p: Optional[Sequence[Optional[Fraction]]] = None
) -> RichmanProfile:
    n = g.num_vertices
    r_a: list[Optional[Fraction]] = [None] * n
    r_b: list[Optional[Fraction]] = [None] * n
    delta: list[Optional[Fraction]] = [None] * n
    zz = [False] * n
    for v in range(n):
        if r[v] is None or g.outcome[v] is not None:
            continue
        ra = min((r[t] for t in g.red[v]), default=None)  # type: ignore[type-var]
        rb = max((r[t] for t in g.blue[v]), default=None)  # type: ignore[type-var]
        if ra is None:
            ra = rb
        if rb is None:
            rb = ra
        r_a[v], r_b[v] = ra, rb
        delta[v] = abs(rb - ra) / 2  # type: ignore[operator]
        zz[v] = rb < ra  # type: ignore[operator]
    return RichmanProfile(tuple(r), tuple(r_a), tuple(r_b), tuple(delta), tuple(zz),
                          None if p is None else tuple(p))


def richman_bounded(g: GameGraph, with_random_turn: bool = False) -> RichmanProfile:
    """Exact values for a bounded game by backward induction."""
    if g.bounded_depth is None:
        raise ValueError("graph is not bounded; use richman_finite")
    order = topological_order(g)
    r: list[Optional[Fraction]] = [None] * g.num_vertices
    for v in order:
        out = g.outcome[v]
        if out is not None:
            r[v] = _terminal_r(out)
            continue
        ra = min((r[t] for t in g.red[v]), default=None)  # type: ignore[type-var]
        rb = max((r[t] for t in g.blue[v]), default=None)  # type: ignore[type-var]
        if ra is None:
            ra = rb
        if rb is None:
            rb = ra
        assert ra is not None and rb is not None
        r[v] = (ra + rb) / 2
    p = random_turn_value(g) if with_random_turn else None
    return _profile_from_r(g, r, p)


def random_turn_value(g: GameGraph) -> tuple[Optional[Fraction], ...]:
    """Alice's win probability when a fair coin picks each mover."""
    if g.bounded_depth is None:
        raise ValueError("graph is not bounded")
    order = topological_order(g)
    p: list[Optional[Fraction]] = [None] * g.num_vertices
    for v in order:
        out = g.outcome[v]
        if out is not None:
            p[v] = Fraction(1) if out is Outcome.ALICE_WIN else Fraction(0)
            continue
        pa = max((p[t] for t in g.red[v]), default=None)  # type: ignore[type-var]
        pb = min((p[t] for t in g.blue[v]), default=None)  # type: ignore[type-var]
        if pa is None:
            pa = pb
        if pb is None:
            pb = pa
        assert pa is not None and pb is not None
        p[v] = (pa + pb) / 2
    return tuple(p)


def _reachable(g: GameGraph) -> list[int]:
    seen = {g.start}
    stack = [g.start]
    while stack:
        v = stack.pop()
        for t in g.red[v] + g.blue[v]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return sorted(seen)


def richman_finite(
    g: GameGraph,
    tol: float = 1e-12,
    max_denominator: int = 10**6,
    max_iters: int = 200_000,
) -> tuple[RichmanProfile, list[float]]:
    """Exact values for any finite game via value iteration from above.

    Returns the profile and the per-iteration float values at the start
    vertex (these equal the truncation values of the game).  Raises
    :class:`ReconstructionError` when the rational reconstruction does not
    verify exactly, which signals ``max_denominator`` is too small.
    """
    reach = _reachable(g)
    val: dict[int, float] = {}
    for v in reach:
        out = g.outcome[v]
        val[v] = 1.0 if out is not Outcome.ALICE_WIN else 0.0
        if out is None:
            val[v] = 1.0
    trace: list[float] = [val[g.start]]
    for _ in range(max_iters):
        delta = 0.0
        new: dict[int, float] = {}
        for v in reach:
            if g.outcome[v] is not None:
                new[v] = val[v]
                continue
            ra = min((val[t] for t in g.red[v]), default=None)
            rb = max((val[t] for t in g.blue[v]), default=None)
            if ra is None:
                ra = rb
            if rb is None:
                rb = ra
            assert ra is not None and rb is not None
            nv = (ra + rb) / 2
            delta = max(delta, abs(nv - val[v]))
            new[v] = nv
        val = new
        trace.append(val[g.start])
        if delta <= tol:
            break
    else:
        raise ReconstructionError("value iteration did not converge", val)

    r: list[Optional[Fraction]] = [None] * g.num_vertices
    for v in reach:
        r[v] = Fraction(val[v]).limit_denominator(max_denominator)
    for v in reach:
        out = g.outcome[v]
        if out is not None:
            if r[v] != _terminal_r(out):
                raise ReconstructionError(f"terminal value drifted at vertex {v}", val)
            continue
        ra = min((r[t] for t in g.red[v]), default=None)  # type: ignore[type-var]
        rb = max((r[t] for t in g.blue[v]), default=None)  # type: ignore[type-var]
        if ra is None:
            ra = rb
        if rb is None:
            rb = ra
        assert ra is not None and rb is not None
        if r[v] != (ra + rb) / 2 or not 0 <= r[v] <= 1:  # type: ignore[operator]
            raise ReconstructionError(
                f"fixed-point verification failed at vertex {v}; "
                "raise max_denominator",
                val,
            )
    return _profile_from_r(g, r), trace


def richman_values(g: GameGraph, **kwargs) -> RichmanProfile:
    """Exact profile by the appropriate method for the graph."""
    if g.bounded_depth is not None:
        return richman_bounded(g)
    profile, _ = richman_finite(g, **kwargs)
    return profile
