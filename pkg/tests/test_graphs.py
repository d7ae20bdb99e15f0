from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bidgames.gamespec import GameSpecError, parse_game
from bidgames.graphs import (
    GameGraph,
    Outcome,
    build_primitive,
    build_tug,
    build_ult,
    longest_path_from_start,
    make_graph,
    reverse,
    truncate,
    wedge,
    wedge_many,
)
from bidgames.richman import richman_bounded

from conftest import random_bounded_game


def test_tug_structure():
    g = build_tug(1)
    assert g.num_vertices == 3
    assert len(g.red[g.start]) == 2 and len(g.blue[g.start]) == 2
    assert g.outcome[g.labels.index("1")] is Outcome.ALICE_WIN
    assert g.outcome[g.labels.index("-1")] is Outcome.BOB_WIN
    with pytest.raises(ValueError):
        build_tug(0)


def test_ult_structure():
    g = build_ult(1)
    assert g.num_vertices == 5
    g2 = build_ult(2)
    # red: 0->2, 1->A, 2->A, -1->0, -2->-1; blue mirrored
    i = g2.labels.index
    assert g2.red[i("0")] == (i("2"),)
    assert g2.blue[i("0")] == (i("-2"),)
    assert g2.red[i("1")] == (i("A"),)
    assert g2.blue[i("1")] == (i("0"),)
    assert g2.red[i("-1")] == (i("0"),)
    assert g2.blue[i("-1")] == (i("B"),)
    with pytest.raises(ValueError):
        build_ult(0)


def test_terminal_iff_edge_free_enforced():
    with pytest.raises(ValueError):
        make_graph(["a"], 0, [[]], [[]], [None])  # edge-free without outcome
    with pytest.raises(ValueError):
        make_graph(
            ["a", "b"], 0, [[1], []], [[], []], [Outcome.TIE, Outcome.TIE]
        )  # edges plus outcome


def test_wedge_counts_and_structure():
    a, b = build_primitive("A"), build_primitive("B")
    w = wedge(a, b)
    assert w.num_vertices == a.num_vertices + b.num_vertices + 1
    assert len(w.red[w.start]) == 2 and len(w.blue[w.start]) == 2
    flat = wedge_many([a, b, build_primitive("E")])
    assert len(flat.red[flat.start]) == 3


def test_wedge_of_same_object():
    e = build_primitive("E")
    w = wedge(e, e)
    assert w.num_vertices == 2 * e.num_vertices + 1


def test_reverse_involution(rng):
    for _ in range(25):
        g = random_bounded_game(rng)
        rr = reverse(reverse(g))
        assert rr.red == g.red and rr.blue == g.blue and rr.outcome == g.outcome


def test_reverse_of_A_is_B_like():
    ra = reverse(build_primitive("A"))
    assert ra.outcome[ra.start] is Outcome.BOB_WIN


def test_truncate_zero_is_tie():
    t = truncate(build_tug(2), 0)
    assert t.outcome[t.start] is Outcome.TIE


def test_truncate_depth_bound(rng):
    for n in (1, 3, 5):
        t = truncate(build_tug(2), n)
        assert t.bounded_depth == n
        assert longest_path_from_start(t) <= n


def test_truncation_of_win_after_wedges():
    # Wedge of fuse games of lengths 1..n+1 truncated after n moves has
    # value 1/2 for n >= 2: the short fuse still burns, the long ones tie.
    for n in (2, 3, 4):
        g = wedge_many([build_primitive("win_after", m) for m in range(1, n + 2)])
        t = truncate(g, n)
        prof = richman_bounded(t)
        assert prof.r[t.start] == Fraction(1, 2)


def test_json_roundtrip(rng):
    for _ in range(10):
        g = random_bounded_game(rng)
        g2 = GameGraph.from_json(g.to_json())
        assert g2.red == g.red and g2.blue == g.blue
        assert g2.outcome == g.outcome and g2.start == g.start
    with pytest.raises(ValueError):
        GameGraph.from_json('{"version": "bidgraph-0", "vertices": [], "start": 0}')


def test_primitive_errors():
    with pytest.raises(ValueError):
        build_primitive("A_pow")
    with pytest.raises(ValueError):
        build_primitive("nonsense")


def test_ladies_blocks_semantics():
    g = build_primitive("ladies_blocks", 2)
    assert g.bounded_depth == 3
    # Alice's first move wins block 1 immediately.
    first_red = g.red[g.start][0]
    assert g.outcome[first_red] is Outcome.ALICE_WIN


@given(st.integers(1, 6))
def test_bid_zero_is_bob_chain(n):
    g = build_primitive("bid_zero", n)
    b = build_primitive("B_pow", n)
    assert g.red == b.red and g.blue == b.blue and g.outcome == b.outcome


def test_gamespec_roundtrip():
    for spec, vertices in [
        ("E", 3),
        ("A^2", 4),
        ("tug:2", 5),
        ("ult:1", 5),
        ("wedge(A,B^2)", 6),
        ("reverse(E)", 3),
        ("truncate(tug:1, 2)", None),
        ("ladies:2", None),
    ]:
        g = parse_game(spec)
        if vertices is not None:
            assert g.num_vertices == vertices
    with pytest.raises(GameSpecError):
        parse_game("wedge(A")
    with pytest.raises(GameSpecError):
        parse_game("nope:3")


def test_gamespec_file_roundtrip(tmp_path):
    g = build_tug(2)
    p = tmp_path / "g.json"
    p.write_text(g.to_json())
    g2 = parse_game(f"file:{p}")
    assert g2.red == g.red
