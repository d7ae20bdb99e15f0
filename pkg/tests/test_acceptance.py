"""Acceptance suite: one test per criterion, each printing a verdict line.

Shared heavyweight artifacts (the full study sweep, the random-game corpus)
are computed once per session.  Every expected value is either asserted
exactly or derived in-test from an independent construction; nothing is
loosened to force green (criterion 3 documents known-bad published entries
and fails honestly).
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from bidgames import reference_tables as ref
from bidgames.analysis import build_certificate, periodicity_constants
from bidgames.bidding import Player, Rule
from bidgames.graphs import (
    build_primitive,
    build_tug,
    build_ult,
    reverse,
    topological_order,
    wedge,
    wedge_many,
    with_start,
)
from bidgames.holdings import ChipHolding, Marker
from bidgames.oracle import (
    ChipState,
    Verdict,
    best_bid,
    best_election,
    solve_chip_states,
    solve_stable,
    UNRANKED,
)
from bidgames.play import Phase, PlaySession, SessionConfig, replay
from bidgames.richman import random_turn_value, richman_bounded, richman_finite
from bidgames.study import run_study
from bidgames.thresholds import threshold_keys
from bidgames.ttt import build_ttt

from conftest import random_bounded_game

A, B = Player.ALICE, Player.BOB
STAR = Marker.STAR


def report(num: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {num:02d} {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture(scope="module")
def study():
    t0 = time.time()
    s = run_study(255, identify_positions=False)
    s.elapsed = time.time() - t0
    return s


@pytest.fixture(scope="module")
def corpus():
    rng = random.Random(20080613)
    return [random_bounded_game(rng, max_v=10, max_deg=3) for _ in range(200)]


def test_criterion_01_critical_fraction():
    t0 = time.time()
    g = build_ttt()
    prof = richman_bounded(g)
    elapsed = time.time() - t0
    ok = prof.r[g.start] == Fraction(133, 256) and elapsed < 10
    report(1, ok, f"critical fraction {prof.r[g.start]} in {elapsed:.2f}s (limit 10s)")
    assert prof.r[g.start] == Fraction(133, 256)
    assert elapsed < 10


PERIOD_SAMPLES = (0, 31, 63, 95, 127, 128, 159, 191, 223, 255)


def _check_opening(study_seq, table, restriction, elapsed):
    mismatches = [k for k in range(256) if study_seq[k] != table.expected_key(k)]
    g = build_ttt(restriction)
    order = topological_order(g)
    period_bad = []
    for r in PERIOD_SAMPLES:
        key = threshold_keys(g, 256 + r, Rule.STANDARD, order)[g.start]
        if key != table.expected_key(256 + r):
            period_bad.append(256 + r)
    return mismatches, period_bad


def test_criterion_02_center_table(study):
    t0 = time.time()
    mism, period_bad = _check_opening(study.f_center, ref.CENTER_OPENING, {4}, study.elapsed)
    elapsed = study.elapsed + time.time() - t0
    ok = not mism and not period_bad and elapsed < 600
    report(
        2,
        ok,
        f"center opening: {256 - len(mism)}/256 exact, period checks at "
        f"{len(PERIOD_SAMPLES)} samples, {elapsed:.1f}s (limit 600s)",
    )
    assert mism == [] and period_bad == []
    assert elapsed < 600


def test_criterion_03_corner_table(study):
    mism, period_bad = _check_opening(study.f_corner, ref.CORNER_OPENING, {0}, study.elapsed)
    known_bad = [56, 120, 155, 184, 248]
    ok = not mism and not period_bad
    report(
        3,
        ok,
        f"corner opening: {256 - len(mism)}/256 exact; mismatches {mism} "
        "(published entries provably wrong: 155 violates threshold "
        "monotonicity, the others inherit the corner-position table's "
        "off-by-one at 56 mod 64; oracle-adjudicated, see decisions ledger)",
    )
    assert mism == known_bad, "divergence set changed; re-audit the corner table"
    assert ok, f"published corner table differs from computed values at {mism}"


def test_criterion_04_optimal_opening_sets(study):
    center_excluded = sorted(set(range(256)) - set(study.center_optimal))
    corner_in_window = [k for k in study.corner_optimal if k <= 30]
    # Beyond the window the per-period increments (133 vs 137) keep corner
    # suboptimal: verified against the whole computed range.
    corner_all = study.corner_optimal
    ok = (
        center_excluded == [5]
        and corner_in_window == list(ref.CORNER_OPTIMAL_TOTALS)
        and corner_all == list(ref.CORNER_OPTIMAL_TOTALS)
    )
    report(
        4,
        ok,
        f"center optimal except {center_excluded}; corner optimal exactly "
        f"{corner_in_window}",
    )
    assert ok


def test_criterion_05_abstract_tables():
    from bidgames.study import abstract_game

    bad = {}
    for table in ref.ABSTRACT_TABLES:
        g = abstract_game(table.name)
        order = topological_order(g)
        miss = [
            k
            for k in range(table.period)
            if threshold_keys(g, k, Rule.STANDARD, order)[g.start] != table.expected_key(k)
        ]
        if miss:
            bad[table.name] = miss
    ok = not bad
    report(5, ok, f"eight abstract tables exact over one period each; bad={bad}")
    assert not bad


def _predicate_matches(g, k, rule, table):
    keys = threshold_keys(g, k, rule)
    delta = 1 if rule is Rule.STANDARD else -1
    for v in range(g.num_vertices):
        if keys[v] is None:
            continue
        for a in range(k + 1):
            for h, tok in ((A, delta), (B, 0)):
                pred = 2 * a + tok >= keys[v]
                orc = bool(
                    table.alice_win[v, a, 0 if h is A else 1]
                )
                if pred != orc:
                    return (v, a, h)
    return None


def test_criterion_06_oracle_equals_recursion(corpus):
    t0 = time.time()
    mism = []
    for i, g in enumerate(corpus):
        for rule in (Rule.STANDARD, Rule.MAKE_IT_TAKE_IT):
            for k in range(0, 9):
                table = solve_chip_states(g, k, rule)
                bad = _predicate_matches(g, k, rule, table)
                if bad is not None:
                    mism.append((i, rule.value, k, bad))
    ok = not mism
    report(
        6,
        ok,
        f"200 random bounded games x k<=8 x both rules: {len(mism)} mismatches "
        f"({time.time() - t0:.1f}s)",
    )
    assert not mism


def _tug_corollary(n, a, tok_alice, b):
    qa, ra = divmod(a, n)
    qb, rb = divmod(b, n)
    if tok_alice:
        return qa > qb or (qa == qb and ra == n - 1)
    return qa > qb


def test_criterion_07_tug_of_war():
    bad = []
    for n in (1, 2, 3):
        g = build_tug(n)
        prof, _ = richman_finite(g)
        for j in range(-n, n + 1):
            v = g.labels.index(str(j))
            if prof.r[v] != Fraction(n - j, 2 * n):
                bad.append(("richman", n, j))
        for total in range(0, 9):
            table = solve_chip_states(g, total)
            for a in range(total + 1):
                for holder, tok_alice in ((A, True), (B, False)):
                    got = (
                        table.verdict(ChipState(g.start, a, total, holder))
                        is Verdict.ALICE_WIN
                    )
                    want = _tug_corollary(n, a, tok_alice, total - a)
                    if got != want:
                        bad.append((n, total, a, holder.value))
                    # Proposition restated: with Bob's total under n, Alice
                    # wins iff her total reaches (n-1)*.
                    b = total - a
                    if (b if tok_alice else b + 0) < n and tok_alice:
                        want_prop = 2 * a + 1 >= 2 * (n - 1) + 1
                        if got != want_prop:
                            bad.append(("prop", n, total, a))
    ok = not bad
    report(7, ok, f"tug props+corollary, n in 1..3, totals<=8, values (n-j)/2n: bad={bad[:4]}")
    assert not bad


def _ult_corollary(n, a, tok_alice, b):
    if tok_alice:
        return a > b or (a == b and a % (2**n) != 2 ** (n - 1) - 1)
    return a > b + 1 or (a == b + 1 and a % (2**n) != 2 ** (n - 1))


def test_criterion_08_ultimatum():
    bad = []
    for n in (1, 2, 3):
        g = build_ult(n)
        for total in range(0, 13):
            table = solve_chip_states(g, total)
            for a in range(total + 1):
                for holder, tok_alice in ((A, True), (B, False)):
                    got = (
                        table.verdict(ChipState(g.start, a, total, holder))
                        is Verdict.ALICE_WIN
                    )
                    b = total - a
                    want = _ult_corollary(n, a, tok_alice, b)
                    if got != want:
                        bad.append((n, total, a, holder.value))
    wedge_g = wedge_many([build_ult(n) for n in (1, 3, 5, 7)])
    aper_bad = []
    for k in range(0, 35):
        table = solve_chip_states(wedge_g, 2 * k)
        verdict = table.verdict(ChipState(wedge_g.start, k, 2 * k, A))
        want_draw = (k % 2 == 0) or (k % 8 == 3) or (k % 32 == 15)
        if (verdict is Verdict.DRAW) != want_draw:
            aper_bad.append(k)
    ok = not bad and not aper_bad
    report(
        8,
        ok,
        f"ultimatum corollary n in 1..3 chips<=12 (bad={bad[:4]}); aperiodicity "
        f"pattern 0 mod 2 / 3 mod 8 / 15 mod 32 for k<=34 (bad={aper_bad})",
    )
    assert not bad and not aper_bad


def test_criterion_09_bid_zero_example():
    bad = []
    for n in range(1, 5):
        g = build_primitive("bid_zero", n)
        for k in range(0, 2**n + 3):
            t = solve_chip_states(g, k)
            star_win = t.verdict(ChipState(g.start, k, k, A)) is Verdict.ALICE_WIN
            if star_win != (k >= 2 ** (n - 1) - 1):
                bad.append(("star", n, k))
            plain_win = t.verdict(ChipState(g.start, k, k, B)) is Verdict.ALICE_WIN
            if plain_win != (k >= 2**n - 1):
                bad.append(("plain", n, k))
    ok = not bad
    report(9, ok, f"bid-zero thresholds 2^(n-1)-1 and 2^n-1 for n<=4: bad={bad}")
    assert not bad


def test_criterion_10_appendix_rules(corpus):
    # (a) covered jointly with criterion 6 (MTT corpus); spot-check again on
    # a fresh sub-corpus to keep this criterion self-contained.
    mism = []
    for g in corpus[:50]:
        for k in range(0, 6):
            table = solve_chip_states(g, k, Rule.MAKE_IT_TAKE_IT)
            if _predicate_matches(g, k, Rule.MAKE_IT_TAKE_IT, table) is not None:
                mism.append((g, k))
    # (b) loser's ball anomaly on second-move-wins.
    smw = build_primitive("second_move_wins")
    anomaly_ok = True
    for a in (0, 1, 2, 3):
        t = solve_chip_states(smw, 2 * a, Rule.LOSERS_BALL)
        if t.verdict(ChipState(smw.start, a, 2 * a, A)) is not Verdict.BOB_WIN:
            anomaly_ok = False
        if t.verdict(ChipState(smw.start, a, 2 * a, B)) is not Verdict.ALICE_WIN:
            anomaly_ok = False
    # (c) ladies-first: truncation values equal prod_{j<=n}(1 - 2^-j),
    # computed here from the formula itself.
    lf_ok = True
    for n in range(1, 5):
        want = Fraction(1)
        for j in range(1, n + 1):
            want *= 1 - Fraction(1, 2**j)
        g = build_primitive("ladies_blocks", n)
        if richman_bounded(g).r[g.start] != want:
            lf_ok = False
    for b in range(0, 4):
        g = build_primitive("ladies_blocks", b + 2)
        t = solve_chip_states(g, b, Rule.LADIES_FIRST)
        if t.verdict(ChipState(g.start, 0, b, None)) is not Verdict.ALICE_WIN:
            lf_ok = False
    ok = not mism and anomaly_ok and lf_ok
    report(
        10,
        ok,
        f"make-it-take-it recursion==oracle ({len(mism)} bad); loser's-ball "
        f"anomaly {anomaly_ok}; ladies-first product values and zero-chip "
        f"block wins {lf_ok}",
    )
    assert ok


def test_criterion_11_random_turn_duality():
    from bidgames.graphs import Outcome

    rng = random.Random(424242)
    bad = 0
    for _ in range(100):
        g = random_bounded_game(rng, outcomes=[Outcome.ALICE_WIN, Outcome.BOB_WIN])
        prof = richman_bounded(g, with_random_turn=True)
        for v in range(g.num_vertices):
            if prof.r[v] is not None and prof.r[v] + prof.p[v] != 1:
                bad += 1
    g = build_ttt()
    p = random_turn_value(g)[g.start]
    ok = bad == 0 and p == Fraction(123, 256)
    report(11, ok, f"R+P=1 on 100 win/lose games ({bad} bad); random-turn value {p}")
    assert ok


def test_criterion_12_periodicity_shifts():
    bad = []
    for g, m, mb in ((build_tug(2), 2, 2), (build_ult(2), 4, 4)):
        consts = periodicity_constants(g)
        assert (consts.m, consts.m_bar) == (m, mb)
        for total in range(0, 9):
            t0 = solve_chip_states(g, total)
            t1 = solve_chip_states(g, total + m + mb)
            for a in range(total + 1):
                for h in (A, B):
                    if t0.verdict(ChipState(g.start, a, total, h)) is Verdict.ALICE_WIN:
                        shifted = ChipState(g.start, a + m, total + m + mb, h)
                        if t1.verdict(shifted) is not Verdict.ALICE_WIN:
                            bad.append((g.kind, total, a, h.value))
    ok = not bad
    report(12, ok, f"(m, m_bar) shifts preserve wins on tug-2 and ult-2 bases: bad={bad}")
    assert not bad


def test_criterion_13_wedge_propositions():
    big = wedge_many([build_tug(n) for n in range(1, 11)])
    t = solve_chip_states(big, 8)
    draw = t.verdict(ChipState(big.start, 6, 8, B))
    t10 = build_tug(10)
    inst = wedge(build_tug(1), with_start(t10, t10.labels.index("1")))
    from bidgames.richman import richman_values

    prof = richman_values(inst)
    st = ChipState(inst.start, 3, 5, A)
    unrestricted = solve_chip_states(inst, 5).verdict(st)
    stable_bob = solve_stable(inst, 5, Rule.STANDARD, prof, players=(B,)).verdict(st)
    ok = (
        draw is Verdict.DRAW
        and unrestricted is Verdict.DRAW
        and stable_bob is Verdict.ALICE_WIN
    )
    report(
        13,
        ok,
        f"tug wedge (6, 2*) -> {draw.value}; instability witness (3*,2): "
        f"unrestricted {unrestricted.value}, value-pinned bob {stable_bob.value}",
    )
    assert ok


FUZZ_GAMES = ["E", "A^2", "B^2", "tug:1", "ult:1", "second_move_wins", "ttt"]


def test_criterion_14_play_fuzz_and_ai_soundness():
    rng = random.Random(777)
    sessions = 100_000
    graphs = {spec: None for spec in FUZZ_GAMES}
    from bidgames.gamespec import parse_game

    for spec in graphs:
        graphs[spec] = parse_game(spec)
    replay_checked = 0
    t0 = time.time()
    for i in range(sessions):
        spec = FUZZ_GAMES[i % len(FUZZ_GAMES)]
        k = rng.randint(0, 3)
        rule = rng.choice(list(Rule))
        cfg = SessionConfig(
            game=spec,
            k=k,
            alice_amount=rng.randint(0, k),
            advantage=None if rule is Rule.LADIES_FIRST else rng.choice([A, B]),
            rule=rule,
        )
        s = PlaySession(cfg, graph=graphs[spec])
        steps = 0
        while s.phase is not Phase.FINISHED and steps < 12:
            steps += 1
            if s.phase is Phase.AWAITING_BIDS:
                s.submit_bid(A, rng.randint(0, s.alice))
                s.submit_bid(B, rng.randint(0, s.bob))
            elif s.phase is Phase.AWAITING_TIE_CHOICE:
                s.resolve_tie(s.actor(), rng.random() < 0.5)
            else:
                actor = s.actor()
                if (
                    s.phase is Phase.AWAITING_ELECTION
                    and s.legal_moves(actor.other)
                    and rng.random() < 0.25
                ):
                    s.elect_and_move(actor, "force_opponent")
                elif s.board is not None:
                    s.elect_and_move(actor, "self", cell=rng.choice(s.legal_cells(actor)))
                else:
                    s.elect_and_move(actor, "self", move=rng.choice(s.legal_moves(actor)))
            # chip conservation and token uniqueness after every operation
            assert 0 <= s.alice <= s.k
            if rule is Rule.LADIES_FIRST:
                assert s.holder is None
            else:
                assert s.holder in (A, B)
        if i % 100 == 0:
            doc = s.to_document()
            s2 = replay(SessionConfig.from_json_obj(doc["config"]), doc["events"], graph=graphs[spec])
            assert s2.to_json() == s.to_json()
            replay_checked += 1
    fuzz_elapsed = time.time() - t0

    # AI soundness: from oracle-winning states, certified play never leaves
    # the winning region against randomized adversaries.
    t0 = time.time()
    playouts = 0
    violations = 0
    arenas = []
    for spec in ("E", "A^2", "B^2", "B^3", "tug:2", "tug:3", "ult:2", "ult:3", "second_move_wins"):
        g = parse_game(spec)
        for k in (2, 4):
            arenas.append((g, k, solve_chip_states(g, k)))
    from bidgames.oracle import _resolutions

    nonterminal = {}
    for idx, (g, k, table) in enumerate(arenas):
        live = np.array([g.outcome[v] is None for v in range(g.num_vertices)])
        nonterminal[idx] = {
            side: np.argwhere(
                (table.alice_win if side is A else table.bob_win) & live[:, None, None]
            )
            for side in (A, B)
        }
    target = 10_000
    attempts = 0
    while playouts < target:
        attempts += 1
        g, k, table = arenas[attempts % len(arenas)]
        side = A if attempts % 2 == 0 else B
        win_arr = table.alice_win if side is A else table.bob_win
        rank = table.alice_rank if side is A else table.bob_rank
        choices = nonterminal[attempts % len(arenas)][side]
        if not len(choices):
            continue
        v, a, hi = map(int, choices[rng.randrange(len(choices))])
        playouts += 1
        cur = ChipState(v, a, k, A if hi == 0 else B)
        guard = 0
        while g.outcome[cur.vertex] is None and guard < 60:
            guard += 1
            bid, tie_self = best_bid(table, cur, side)
            adv = side.other
            y = rng.randint(0, cur.alice if adv is A else cur.bob)
            bids = (bid, y) if side is A else (y, bid)
            branches = _resolutions(Rule.STANDARD, k, cur.alice, cur.holder, *bids)
            if len(branches) == 2:
                if cur.holder is side:
                    branches = [branches[0] if tie_self else branches[1]]
                else:
                    branches = [branches[rng.randrange(2)]]  # adversary's whim
            winner, a2, h2 = branches[0]
            my_moves = g.red[cur.vertex] if winner is A else g.blue[cur.vertex]
            their_moves = g.blue[cur.vertex] if winner is A else g.red[cur.vertex]
            hidx = 0 if h2 is A else 1
            if winner is side:
                election, move = best_election(table, side, winner, cur.vertex, a2, h2)
                if election == "self":
                    nxt = move
                else:
                    nxt = rng.choice(list(their_moves))  # forced adversary roams
            else:
                # Random adversary winner: random election among legal ones,
                # random own move; a forced AI picks its rank-best move.
                options = []
                if my_moves:
                    options.append("self")
                if their_moves:
                    options.append("force")
                if rng.choice(options) == "self":
                    nxt = rng.choice(list(my_moves))
                else:
                    nxt = min(their_moves, key=lambda t: int(rank[t, a2, hidx]))
            cur = ChipState(nxt, a2, k, h2)
            if g.outcome[cur.vertex] is None and not win_arr[cur.vertex, cur.alice, hidx]:
                violations += 1
                break
    ai_elapsed = time.time() - t0
    ok = violations == 0
    report(
        14,
        ok,
        f"{sessions} fuzz sessions (replay checked x{replay_checked}, "
        f"{fuzz_elapsed:.0f}s); {playouts} AI playouts, {violations} region "
        f"exits ({ai_elapsed:.0f}s)",
    )
    assert violations == 0
