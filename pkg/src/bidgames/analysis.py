"""Periodicity, stability, and the partial order on games.

Finite games repeat: with ``M`` clearing every vertex value's denominator,
``m = M*R(G)`` and ``m_bar = M*R(reversed G)``, adding ``m`` chips to Alice
and ``m_bar`` to Bob preserves the winner once totals are large enough.
:func:`periodicity_constants` computes the numbers, :func:`build_certificate`
attaches an oracle-solved base window plus strip thresholds, and
:func:`extend_periodic` answers arbitrary chip-count queries by reducing
into that window (never guessing: out-of-window queries come back
uncertified).

``compare_games`` settles ``f(G,k) <= f(H,k) for all k`` from two computed
periods plus the per-period increments; ``is_stable`` checks whether
threshold-optimal moves can be kept inside the value-optimal ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .bidding import Player, Rule
from .graphs import GameGraph, reverse, topological_order
from .holdings import ChipHolding, Marker
from .oracle import ChipState, OutcomeTable, Verdict, solve_chip_states
from .richman import RichmanProfile, richman_values
from .thresholds import threshold_keys


@dataclass(frozen=True)
class PeriodicityConstants:
    M: int
    m: int
    m_bar: int


def periodicity_constants(g: GameGraph, profile: RichmanProfile | None = None) -> PeriodicityConstants:
    """M = lcm of the value/bid denominators; m, m_bar its start multiples."""
    if profile is None:
        profile = richman_values(g)
    M = 1
    for seq in (profile.r, profile.delta):
        for x in seq:
            if x is not None:
                M = M * x.denominator // math.gcd(M, x.denominator)
    r0 = profile.r[g.start]
    assert r0 is not None
    m = int(M * r0)
    m_bar = int(M * (1 - r0))
    return PeriodicityConstants(M, m, m_bar)


class ExtendedVerdict(str, Enum):
    ALICE_WIN = "alice_win"
    NOT_WIN = "not_win"
    UNCERTIFIED = "uncertified"


@dataclass
class PeriodicityCertificate:
    """Base oracle window plus strip thresholds, validated for shifting.

    ``tables[k]`` solves every state at total ``k`` for ``k <= base_total``.
    ``alice_strip[(b, bob_has_token)]`` is the least Alice amount that wins
    when Bob's side is pinned in the low strip (None when no win was found
    within the scanned range).  ``offset`` is the empirically found total
    above which the (m, m_bar) shift preserved every outcome in the window.
    """

    game: GameGraph
    rule: Rule
    constants: PeriodicityConstants
    tables: dict[int, OutcomeTable]
    base_total: int
    alice_strip: dict[tuple[int, bool], Optional[int]] = field(default_factory=dict)
    bob_strip: dict[tuple[int, bool], Optional[int]] = field(default_factory=dict)
    offset: int = 0


def build_certificate(
    g: GameGraph,
    rule: Rule = Rule.STANDARD,
    extra_periods: int = 2,
    state_cap: int = 2_000_000,
) -> PeriodicityCertificate:
    consts = periodicity_constants(g)
    base_total = consts.M * (extra_periods + 1) + 2
    tables = {k: solve_chip_states(g, k, rule, state_cap=state_cap) for k in range(base_total + 1)}
    cert = PeriodicityCertificate(g, rule, consts, tables, base_total)

    # Empirical stabilization: find the least total above which shifting by
    # (m, m_bar) preserves the Alice-win flag for every token placement.
    m, mb = consts.m, consts.m_bar
    offset = 0
    if m + mb > 0:
        for k in range(0, base_total - (m + mb) + 1):
            t0, t1 = tables[k], tables[k + m + mb]
            for a in range(k + 1):
                for holder in (Player.ALICE, Player.BOB):
                    s0 = ChipState(g.start, a, k, holder)
                    s1 = ChipState(g.start, a + m, k + m + mb, holder)
                    if (t0.verdict(s0) is Verdict.ALICE_WIN) != (
                        t1.verdict(s1) is Verdict.ALICE_WIN
                    ):
                        offset = k + 1
    cert.offset = offset

    # Strip thresholds: minimal winning Alice amount for each pinned Bob
    # side (and the mirrored minimal preventing Bob amount).
    scan = base_total
    for b in range(min(mb + offset, base_total) + 1):
        for bob_token in (False, True):
            found = None
            for a in range(0, scan - b + 1):
                st = ChipState(g.start, a, a + b, Player.BOB if bob_token else Player.ALICE)
                if tables[a + b].verdict(st) is Verdict.ALICE_WIN:
                    found = a
                    break
            cert.alice_strip[(b, bob_token)] = found
    for a in range(min(m + offset, base_total) + 1):
        for alice_token in (False, True):
            found = None
            for b in range(0, scan - a + 1):
                st = ChipState(g.start, a, a + b, Player.ALICE if alice_token else Player.BOB)
                if tables[a + b].verdict(st) is not Verdict.ALICE_WIN:
                    found = b
                    break
            cert.bob_strip[(a, alice_token)] = found
    return cert


def extend_periodic(
    cert: PeriodicityCertificate, alice: ChipHolding, bob_amount: int
) -> ExtendedVerdict:
    """Answer a chip-count query by reduction into the certified window."""
    if alice.marker is Marker.MINUS_EPS:
        raise ValueError("certificates cover the standard-rule order")
    a, b = alice.amount, bob_amount
    alice_token = alice.marker is Marker.STAR
    m, mb = cert.constants.m, cert.constants.m_bar
    while True:
        if a + b <= cert.base_total:
            st = ChipState(
                cert.game.start, a, a + b, Player.ALICE if alice_token else Player.BOB
            )
            ok = cert.tables[a + b].verdict(st) is Verdict.ALICE_WIN
            return ExtendedVerdict.ALICE_WIN if ok else ExtendedVerdict.NOT_WIN
        if b <= mb + cert.offset:
            thr = cert.alice_strip.get((b, not alice_token))
            if thr is None:
                return ExtendedVerdict.UNCERTIFIED
            return ExtendedVerdict.ALICE_WIN if a >= thr else ExtendedVerdict.NOT_WIN
        if a <= m + cert.offset:
            thr = cert.bob_strip.get((a, alice_token))
            if thr is None:
                return ExtendedVerdict.UNCERTIFIED
            return ExtendedVerdict.NOT_WIN if b >= thr else ExtendedVerdict.ALICE_WIN
        if m + mb == 0 or a - m < 0 or b - mb < 0:
            return ExtendedVerdict.UNCERTIFIED
        a -= m
        b -= mb


# -- stability ----------------------------------------------------------------


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    witness: Optional[int]  # first vertex whose threshold moves when a side is pinned to stable moves


def _stable_subgraph(g: GameGraph, profile: RichmanProfile, player: Player) -> GameGraph:
    from .graphs import make_graph

    red = [list(t) for t in g.red]
    blue = [list(t) for t in g.blue]
    for v in range(g.num_vertices):
        if player is Player.ALICE and g.red[v]:
            best = min(profile.r[t] for t in g.red[v])  # type: ignore[type-var]
            red[v] = [t for t in g.red[v] if profile.r[t] == best]
        if player is Player.BOB and g.blue[v]:
            best = max(profile.r[t] for t in g.blue[v])  # type: ignore[type-var]
            blue[v] = [t for t in g.blue[v] if profile.r[t] == best]
    return make_graph(g.labels, g.start, red, blue, g.outcome, g.bounded_depth, kind=g.kind)


def is_stable(
    g: GameGraph, k: int, rule: Rule = Rule.STANDARD, profile: RichmanProfile | None = None
) -> StabilityReport:
    """Whether both sides can stick to value-optimal moves without cost.

    Pins one side at a time to its value-optimal moves and recomputes the
    thresholds: the game is stable at total ``k`` iff neither restriction
    changes any reachable vertex's threshold.  The witness is the first
    vertex (in traversal order from the start) whose threshold moves.
    """
    if profile is None:
        profile = richman_values(g)
    keys = threshold_keys(g, k, rule)
    for player in (Player.ALICE, Player.BOB):
        sub = _stable_subgraph(g, profile, player)
        sub_keys = threshold_keys(sub, k, rule)
        if sub_keys[g.start] == keys[g.start]:
            continue
        # Diagnose where the divergence first appears: BFS from the start.
        changed = {
            v
            for v in range(g.num_vertices)
            if keys[v] is not None and sub_keys[v] is not None and sub_keys[v] != keys[v]
        }
        seen, queue = {g.start}, [g.start]
        while queue:
            v = queue.pop(0)
            if v in changed:
                return StabilityReport(False, v)
            for t in g.red[v] + g.blue[v]:
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        return StabilityReport(False, g.start)
    return StabilityReport(True, None)


# -- partial order ------------------------------------------------------------


class CompareVerdict(str, Enum):
    LESS = "less"  # G < H strictly somewhere, never above
    GREATER = "greater"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class CompareResult:
    verdict: CompareVerdict
    certified_all_k: bool
    window: int
    witness_less: Optional[int]  # k with f(G,k) < f(H,k)
    witness_greater: Optional[int]


def _root_keys(g: GameGraph, k_values: Sequence[int], rule: Rule) -> list[int]:
    order = topological_order(g)
    out = []
    for k in k_values:
        key = threshold_keys(g, k, rule, order)[g.start]
        assert key is not None
        out.append(key)
    return out


def compare_games(
    g: GameGraph,
    h: GameGraph,
    rule: Rule = Rule.STANDARD,
    k_max: Optional[int] = None,
) -> CompareResult:
    """Order verdict for the chip-threshold partial order on games.

    Thresholds are compared over two full common periods (plus any request
    below ``k_max``); the per-period increments ``L*R`` settle all larger
    totals when the window itself verifies the periodic shift.
    """
    cg = periodicity_constants(g)
    ch = periodicity_constants(h)
    L = cg.M * ch.M // math.gcd(cg.M, ch.M)
    window = max(2 * L + 1, (k_max or 0) + 1)
    ks = range(window)
    fg = _root_keys(g, ks, rule)
    fh = _root_keys(h, ks, rule)
    inc_g = 2 * L * cg.m // cg.M  # key increment per L chips (keys scale by 2)
    inc_h = 2 * L * ch.m // ch.M
    periodic = all(fg[k + L] == fg[k] + inc_g for k in range(window - L)) and all(
        fh[k + L] == fh[k] + inc_h for k in range(window - L)
    )
    wl = next((k for k in ks if fg[k] < fh[k]), None)
    wg = next((k for k in ks if fg[k] > fh[k]), None)
    if wl is None and wg is None:
        verdict = CompareVerdict.EQUIVALENT
        certified = periodic and inc_g == inc_h
    elif wg is None:
        verdict = CompareVerdict.LESS
        certified = periodic and inc_g <= inc_h
    elif wl is None:
        verdict = CompareVerdict.GREATER
        certified = periodic and inc_g >= inc_h
    else:
        verdict = CompareVerdict.INCOMPARABLE
        certified = True  # two explicit witnesses settle it outright
    return CompareResult(verdict, certified, window, wl, wg)
