from __future__ import annotations

import numpy as np
import pytest

from bidgames.bidding import Player, Rule
from bidgames.graphs import build_primitive, build_tug, build_ult, reverse, wedge_many
from bidgames.holdings import ChipHolding, Marker
from bidgames.oracle import (
    ChipState,
    Verdict,
    best_bid,
    best_election,
    outcome,
    solve_chip_states,
    solve_chip_states_slow,
)
from bidgames.thresholds import threshold_keys

from conftest import random_bounded_game

STAR = Marker.STAR


def verdicts(table, vertex=None):
    v = table.graph.start if vertex is None else vertex
    return {
        (a, h): table.verdict(ChipState(v, a, table.k, h))
        for a in range(table.k + 1)
        for h in (Player.ALICE, Player.BOB)
    }


def test_terminal_game_any_holdings():
    A = build_primitive("A")
    for k in (0, 3):
        t = solve_chip_states(A, k)
        assert all(v is Verdict.ALICE_WIN for v in verdicts(t).values())


def test_fast_matches_slow_reference(rng):
    for _ in range(12):
        g = random_bounded_game(rng, max_v=6)
        for rule in Rule:
            for k in (0, 2, 3):
                fast = solve_chip_states(g, k, rule)
                slow = solve_chip_states_slow(g, k, rule)
                assert (fast.alice_win == slow.alice_win).all(), (rule, k)
                assert (fast.bob_win == slow.bob_win).all(), (rule, k)


def test_win_sets_disjoint(rng):
    for _ in range(15):
        g = random_bounded_game(rng)
        for rule in Rule:
            t = solve_chip_states(g, 3, rule)
            assert not (t.alice_win & t.bob_win).any()


def test_up_set_structure(rng):
    # For the totally ordered regimes, Alice-win states are upward closed in
    # her holding (the token is worth more than nothing, less than a chip).
    for _ in range(15):
        g = random_bounded_game(rng)
        for rule in (Rule.STANDARD, Rule.MAKE_IT_TAKE_IT):
            k = 4
            t = solve_chip_states(g, k, rule)
            for v in range(g.num_vertices):
                states = []
                for a in range(k + 1):
                    for h in (Player.ALICE, Player.BOB):
                        s = ChipState(v, a, k, h)
                        states.append(
                            (s.alice_holding(rule).key(), t.verdict(s) is Verdict.ALICE_WIN)
                        )
                states.sort()
                flags = [w for _, w in states]
                assert flags == sorted(flags), (rule, v)


def test_star_advantage_and_worth_less_than_chip(rng):
    # Win at (a, b*) implies win at (a*, b); win at (a*, b+1) implies win
    # at (a+1, b*).
    for _ in range(15):
        g = random_bounded_game(rng)
        k = 5
        t = solve_chip_states(g, k)
        t1 = solve_chip_states(g, k + 1)
        for v in range(g.num_vertices):
            for a in range(k + 1):
                if t.verdict(ChipState(v, a, k, Player.BOB)) is Verdict.ALICE_WIN:
                    assert t.verdict(ChipState(v, a, k, Player.ALICE)) is Verdict.ALICE_WIN
            for a in range(k + 1):
                # (a*, b+1) at total k+1 vs (a+1, b*) at total k+1
                if (
                    t1.verdict(ChipState(v, a, k + 1, Player.ALICE))
                    is Verdict.ALICE_WIN
                ):
                    assert (
                        t1.verdict(ChipState(v, a + 1, k + 1, Player.BOB))
                        is Verdict.ALICE_WIN
                    )


def test_duality_roleswap(rng):
    # outcome(G, x, y) equals the role-swapped outcome(reverse(G), y, x) for
    # the symmetric tie rules.
    swap = {
        Verdict.ALICE_WIN: Verdict.BOB_WIN,
        Verdict.BOB_WIN: Verdict.ALICE_WIN,
        Verdict.DRAW: Verdict.DRAW,
    }
    for _ in range(10):
        g = random_bounded_game(rng, max_v=6)
        rg = reverse(g)
        k = 4
        for rule in (Rule.STANDARD, Rule.MAKE_IT_TAKE_IT, Rule.LOSERS_BALL):
            t = solve_chip_states(g, k, rule)
            rt = solve_chip_states(rg, k, rule)
            for v in range(g.num_vertices):
                for a in range(k + 1):
                    for h in (Player.ALICE, Player.BOB):
                        s = ChipState(v, a, k, h)
                        ss = ChipState(v, k - a, k, h.other)
                        assert t.verdict(s) is swap[rt.verdict(ss)], (rule, v, a, h)


def test_ladies_first_duality_fails_somewhere(rng):
    # Alice-wins-ties is asymmetric; at least one instance must break the
    # role-swap identity.
    swap = {
        Verdict.ALICE_WIN: Verdict.BOB_WIN,
        Verdict.BOB_WIN: Verdict.ALICE_WIN,
        Verdict.DRAW: Verdict.DRAW,
    }
    broken = 0
    games = [build_primitive("E")] + [random_bounded_game(rng, max_v=6) for _ in range(10)]
    for g in games:
        rg = reverse(g)
        for k in (0, 1, 3):
            t = solve_chip_states(g, k, Rule.LADIES_FIRST)
            rt = solve_chip_states(rg, k, Rule.LADIES_FIRST)
            for v in range(g.num_vertices):
                for a in range(k + 1):
                    s = ChipState(v, a, k, None)
                    ss = ChipState(v, k - a, k, None)
                    if t.verdict(s) is not swap[rt.verdict(ss)]:
                        broken += 1
    assert broken > 0


def test_tug2_proposition_states():
    t = solve_chip_states(build_tug(2), 2)
    g = build_tug(2)
    assert t.verdict(ChipState(g.start, 1, 2, Player.ALICE)) is Verdict.ALICE_WIN
    # Mirrored proposition: Bob's 1* meets his own threshold.
    assert t.verdict(ChipState(g.start, 1, 2, Player.BOB)) is Verdict.BOB_WIN


def test_ult_sanity_and_outcome_api():
    u1 = build_ult(1)
    assert outcome(u1, ChipHolding(1, STAR), 1) is Verdict.ALICE_WIN
    u2 = build_ult(2)
    assert outcome(u2, ChipHolding(3, STAR), 2) is Verdict.ALICE_WIN
    assert outcome(u2, ChipHolding(2, STAR), 2) is Verdict.ALICE_WIN  # a=b=2 != 1
    assert outcome(u2, ChipHolding(1, STAR), 1) is Verdict.DRAW  # a=b=2^{n-1}-1


def test_bid_zero_example_n3():
    g = build_primitive("bid_zero", 3)
    assert outcome(g, ChipHolding(3, STAR), 0) is Verdict.ALICE_WIN
    assert outcome(g, ChipHolding(2, STAR), 0) is not Verdict.ALICE_WIN
    assert outcome(g, ChipHolding(7), 0, holder=Player.BOB) is Verdict.ALICE_WIN
    assert outcome(g, ChipHolding(6), 0, holder=Player.BOB) is not Verdict.ALICE_WIN


def test_second_move_wins_unique_line():
    # With equal chips the star holder wins, and only by bidding zero and
    # declining the tie.
    g = build_primitive("second_move_wins")
    for a in (1, 2, 3):
        k = 2 * a
        table = solve_chip_states(g, k)
        st = ChipState(g.start, a, k, Player.ALICE)
        assert table.verdict(st) is Verdict.ALICE_WIN
        assert table.verdict(ChipState(g.start, a, k, Player.BOB)) is Verdict.BOB_WIN
        bid, tie_self = best_bid(table, st, Player.ALICE)
        assert (bid, tie_self) == (0, False)
        # No other (bid, tie) pair survives every reply: winning requires
        # hoarding every chip for the second move.
        rank = table.alice_rank
        my_rank = int(rank[st.vertex, st.alice, 0])
        from bidgames.oracle import _post_move_rank, _resolutions

        for x in range(a + 1):
            for ts in (True, False):
                if (x, ts) == (0, False):
                    continue
                ok = True
                for y in range(a + 1):
                    branches = _resolutions(Rule.STANDARD, k, a, Player.ALICE, x, y)
                    if len(branches) == 2:
                        branches = [branches[0] if ts else branches[1]]
                    worst = max(
                        _post_move_rank(table, Player.ALICE, w, st.vertex, a2, h2)[0]
                        for (w, a2, h2) in branches
                    )
                    if worst >= my_rank:
                        ok = False
                        break
                assert not ok, (x, ts)


def test_losers_ball_anomaly():
    # Second-move-wins with equal chips: the side *without* the eps token
    # wins, so holding it is a disadvantage here.
    g = build_primitive("second_move_wins")
    for a in (0, 1, 2):
        k = 2 * a
        t = solve_chip_states(g, k, Rule.LOSERS_BALL)
        assert t.verdict(ChipState(g.start, a, k, Player.ALICE)) is Verdict.BOB_WIN
        assert t.verdict(ChipState(g.start, a, k, Player.BOB)) is Verdict.ALICE_WIN


def test_ladies_first_blocks_win_with_no_chips():
    for b in range(0, 3):
        g = build_primitive("ladies_blocks", b + 2)
        t = solve_chip_states(g, b, Rule.LADIES_FIRST)
        assert t.verdict(ChipState(g.start, 0, b, None)) is Verdict.ALICE_WIN


def test_periodicity_shift_on_tug2():
    # AliceWin at (a, b) implies AliceWin at (a+2, b+2), both star spots.
    g = build_tug(2)
    m = mb = 2
    for k in range(0, 9):
        t0 = solve_chip_states(g, k)
        t1 = solve_chip_states(g, k + m + mb)
        for a in range(k + 1):
            for h in (Player.ALICE, Player.BOB):
                if t0.verdict(ChipState(g.start, a, k, h)) is Verdict.ALICE_WIN:
                    assert (
                        t1.verdict(ChipState(g.start, a + m, k + m + mb, h))
                        is Verdict.ALICE_WIN
                    )


def test_state_cap():
    with pytest.raises(ValueError):
        solve_chip_states(build_tug(2), 10, state_cap=10)


def test_certified_actions_progress(rng):
    # best_bid / best_election always lead to strictly smaller ranks.
    for _ in range(10):
        g = random_bounded_game(rng, max_v=6)
        k = 3
        t = solve_chip_states(g, k)
        for v in range(g.num_vertices):
            if g.outcome[v] is not None:
                continue
            for a in range(k + 1):
                for h in (Player.ALICE, Player.BOB):
                    s = ChipState(v, a, k, h)
                    if t.verdict(s) is not Verdict.ALICE_WIN:
                        continue
                    bid, tie_self = best_bid(t, s, Player.ALICE)
                    assert 0 <= bid <= a


def test_restricted_first_move_classes_at_five_chips():
    # With five chips in play, pinning Alice's opening to the center costs
    # her the (3, plain) win that the corner opening keeps.
    from bidgames.oracle import solve_restricted
    from bidgames.ttt import build_ttt, canonical

    g = build_ttt()
    center = {g.start: [g.labels.index(canonical("....A...."))]}
    corner = {g.start: [g.labels.index(canonical("A........"))]}
    st = ChipState(g.start, 3, 5, Player.BOB)
    via_center = solve_restricted(g, 5, Rule.STANDARD, alice_allowed=center).verdict(st)
    via_corner = solve_restricted(g, 5, Rule.STANDARD, alice_allowed=corner).verdict(st)
    assert via_center is Verdict.BOB_WIN
    assert via_corner is Verdict.ALICE_WIN


def test_restriction_is_identity_for_single_move_games():
    # When every vertex has a unique move per color, the value-optimal
    # restriction cannot bite.
    from bidgames.oracle import solve_stable
    from bidgames.richman import richman_values

    g = build_ult(2)
    prof = richman_values(g)
    for k in (2, 5):
        plain = solve_chip_states(g, k)
        pinned = solve_stable(g, k, Rule.STANDARD, prof)
        assert (plain.alice_win == pinned.alice_win).all()
        assert (plain.bob_win == pinned.bob_win).all()
